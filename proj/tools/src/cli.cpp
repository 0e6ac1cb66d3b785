#include "gsearch_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>

#include "commands.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/version.hpp"
#include "output.hpp"

namespace gsearch::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

template <class T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw InvalidArgument(std::string("cannot parse ") + what + " from '" + text + "'");
  }
  return value;
}

}  // namespace

LatticeSpec parse_cells(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  const auto parts = split(lower, 'x');
  if (parts.size() != 2) throw InvalidArgument("cells must look like MxN, got '" + text + "'");
  return LatticeSpec(parse_number<int>(parts[0], "cell count"), parse_number<int>(parts[1], "cell count"));
}

SiteId parse_mark(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw InvalidArgument("mark must look like ALPHA,BETA,A|B, got '" + text + "'");
  SiteId site;
  site.alpha = parse_number<int>(parts[0], "alpha");
  site.beta = parse_number<int>(parts[1], "beta");
  if (parts[2] == "A" || parts[2] == "a") {
    site.sublattice = Sublattice::A;
  } else if (parts[2] == "B" || parts[2] == "b") {
    site.sublattice = Sublattice::B;
  } else {
    throw InvalidArgument("sublattice must be A or B, got '" + parts[2] + "'");
  }
  return site;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument("grid must look like FROM:TO:STEP, got '" + text + "'");
  GridSpec grid{parse_number<double>(parts[0], "grid start"), parse_number<double>(parts[1], "grid end"),
                parse_number<double>(parts[2], "grid step")};
  if (!(grid.from < grid.to) || !(grid.step > 0.0)) {
    throw InvalidArgument("grid needs FROM < TO and STEP > 0, got '" + text + "'");
  }
  return grid;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    for (const auto& part : split(text, ',')) sizes.push_back(parse_number<int>(part, "size"));
  } else {
    const auto colon = text.find(':', dots);
    const int from = parse_number<int>(text.substr(0, dots), "size range start");
    const int to = parse_number<int>(text.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2),
                                     "size range end");
    const int step = colon == std::string::npos ? 3 : parse_number<int>(text.substr(colon + 1), "size range step");
    if (step <= 0 || from > to) throw InvalidArgument("size range needs FROM <= TO and STEP > 0");
    for (int s = from; s <= to; s += step) sizes.push_back(s);
  }
  for (int s : sizes) {
    if (s < 3 || s % 3 != 0) {
      throw DiracUnavailable("size " + std::to_string(s) + " is not a positive multiple of 3");
    }
  }
  return sizes;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuous-time quantum search on graphene tori", "graphene-search"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.require_subcommand(1);

  SpectrumArgs spectrum;
  auto* sub_spectrum = app.add_subcommand("spectrum", "Spectrum of H_gamma over a gamma grid");
  sub_spectrum->add_option("--cells", spectrum.cells, "Torus size MxN")->capture_default_str();
  sub_spectrum->add_option("--gamma", spectrum.gamma, "Gamma grid FROM:TO:STEP")->capture_default_str();
  sub_spectrum->add_option("--mark", spectrum.mark, "Marked site ALPHA,BETA,A|B")->capture_default_str();
  sub_spectrum->add_option("--out", spectrum.out, "CSV output path")->capture_default_str();
  sub_spectrum->add_option("--svg", spectrum.svg, "Optional SVG plot path");

  SearchArgs search;
  auto* sub_search = app.add_subcommand("search", "Search run at gamma = 1");
  sub_search->add_option("--cells", search.cells, "Torus size MxN")->capture_default_str();
  sub_search->add_option("--mark", search.mark, "Marked site ALPHA,BETA,A|B")->capture_default_str();
  sub_search->add_option("--start", search.start, "Start state")
      ->check(CLI::IsMember({"optimal", "uniform-dirac"}))
      ->capture_default_str();
  sub_search->add_option("--dt", search.dt, "Time step (0: reduced time / 200)")->capture_default_str();
  sub_search->add_option("--tmax", search.tmax, "Final time (0: 2.5 x reduced time)")->capture_default_str();
  sub_search->add_option("--out", search.out, "CSV output path")->capture_default_str();
  sub_search->add_option("--svg", search.svg, "Optional SVG plot path");

  ScalingArgs scaling;
  auto* sub_scaling = app.add_subcommand("scaling", "Finite-size scaling studies");
  sub_scaling->add_option("--study", scaling.study, "Study kind")
      ->check(CLI::IsMember({"gap", "time", "amplitude", "moments"}))
      ->capture_default_str();
  sub_scaling->add_option("--sizes", scaling.sizes, "Sizes FROM..TO:STEP or a comma list")->capture_default_str();
  sub_scaling->add_option("--mark", scaling.mark, "Marked site ALPHA,BETA,A|B")->capture_default_str();
  sub_scaling->add_option("--out", scaling.out, "CSV output path")->capture_default_str();

  TransferArgs transfer;
  auto* sub_transfer = app.add_subcommand("transfer", "State transfer between two perturbations");
  sub_transfer->add_option("--cells", transfer.cells, "Torus size MxN")->capture_default_str();
  sub_transfer->add_option("--mark1", transfer.mark1, "First marked site")->capture_default_str();
  sub_transfer->add_option("--mark2", transfer.mark2, "Second marked site")->capture_default_str();
  sub_transfer->add_option("--dt", transfer.dt, "Time step (0: reduced time / 20)")->capture_default_str();
  sub_transfer->add_option("--tmax", transfer.tmax, "Final time (0: 150 x reduced time)")->capture_default_str();
  sub_transfer->add_option("--out", transfer.out, "CSV output path")->capture_default_str();
  sub_transfer->add_option("--svg", transfer.svg, "Optional SVG plot path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::string stage = "setup";
  std::string command = "graphene-search";
  try {
    if (sub_spectrum->parsed()) {
      command += " spectrum";
      cmd_spectrum(spectrum, out, stage);
    } else if (sub_search->parsed()) {
      command += " search";
      cmd_search(search, out, stage);
    } else if (sub_scaling->parsed()) {
      command += " scaling";
      cmd_scaling(scaling, out, stage);
    } else if (sub_transfer->parsed()) {
      command += " transfer";
      cmd_transfer(transfer, out, stage);
    }
  } catch (const InvalidArgument& e) {
    err << command << ": " << stage << ": " << e.what() << '\n';
    return kUsage;
  } catch (const DiracUnavailable& e) {
    err << command << ": " << stage << ": " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << command << ": " << stage << ": " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << command << ": " << stage << ": " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace gsearch::cli
