#pragma once

#include <iosfwd>
#include <string>

namespace gsearch::cli {

struct SpectrumArgs {
  std::string cells = "12x12";
  std::string gamma = "0:1.2:0.005";
  std::string mark = "0,0,A";
  std::string out = "spectrum.csv";
  std::string svg;
};

struct SearchArgs {
  std::string cells = "12x12";
  std::string mark = "0,0,A";
  std::string start = "optimal";
  double dt = 0.0;
  double tmax = 0.0;
  std::string out = "search.csv";
  std::string svg;
};

struct ScalingArgs {
  std::string study = "gap";
  std::string sizes = "6..24:3";
  std::string mark = "0,0,A";
  std::string out = "scaling.csv";
};

struct TransferArgs {
  std::string cells = "12x12";
  std::string mark1 = "0,0,A";
  std::string mark2 = "6,6,A";
  double dt = 0.0;
  double tmax = 0.0;
  std::string out = "transfer.csv";
  std::string svg;
};

/// Each command updates `stage` before every step so failures can name it.
void cmd_spectrum(const SpectrumArgs& args, std::ostream& out, std::string& stage);
void cmd_search(const SearchArgs& args, std::ostream& out, std::string& stage);
void cmd_scaling(const ScalingArgs& args, std::ostream& out, std::string& stage);
void cmd_transfer(const TransferArgs& args, std::ostream& out, std::string& stage);

}  // namespace gsearch::cli
