#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vpflab/sweeps.hpp"

namespace vpflab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitPipeline = 4;

enum class Command { Curves, Corr, CorrMap, VpfMap, SignMap, SelfTest };
enum class Format { Csv, Json };

const char* to_string(Command cmd);

struct CliConfig {
  Command command = Command::SelfTest;
  SweepConfig sweep = SweepConfig::full_grid();
  CentroidKind kind = CentroidKind::Intra;
  CorrPair which = CorrPair::I1_vs_P2;
  std::string output_path;  // empty: standard output
  Format format = Format::Csv;
};

// Carries the exit code that main should return.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// "2..31", "4", "2,4,8" or mixtures such as "2..5,9".
std::vector<int> parse_q_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

// Parses argv (without the program name). Flags override keys from
// --config. Throws CliError with kExitValidation on any problem; a help
// request throws CliError with kExitOk and the help text as message.
CliConfig parse_config(const std::vector<std::string>& args);

// Worker cap from VPFLAB_THREADS; 0 when unset. Throws CliError on
// malformed values.
unsigned threads_from_env();

std::vector<StatMap> compute(const CliConfig& cfg);

// One line describing every setting that influences the output.
std::string metadata_line(const CliConfig& cfg);
std::string render_csv(const CliConfig& cfg, const std::vector<StatMap>& maps);
std::string render_json(const CliConfig& cfg, const std::vector<StatMap>& maps);

// Executes the command and writes its output; returns the exit code.
int run(const CliConfig& cfg, std::ostream& out, std::ostream& err);

int main_entry(int argc, char** argv);

}  // namespace vpflab::cli
