#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vpflab/selftest.hpp"
#include "vpflab/statmodel.hpp"

namespace vpflab::cli {
namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void invalid(const std::string& what) {
  throw CliError(kExitValidation, what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

int to_int(const std::string& s, const std::string& ctx) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    invalid("malformed integer '" + s + "' in " + ctx);
  }
  return v;
}

double to_real(const std::string& s, const std::string& ctx) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    invalid("malformed number '" + s + "' in " + ctx);
  }
  return v;
}

std::string join_q(const std::vector<int>& qs) {
  std::string s;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(qs[i]);
  }
  return s;
}

std::string join_real(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += fmt_real(xs[i]);
  }
  return s;
}

const char* kind_name(CentroidKind k) {
  return k == CentroidKind::Intra ? "intra" : "inter";
}

const char* which_name(CorrPair w) {
  return w == CorrPair::I1_vs_P2 ? "i1p2" : "p1p2";
}

const char* pred_name(PredSource p) {
  return p == PredSource::FirstRecon ? "first" : "second";
}

const char* skip_name(SkipRecon s) {
  return s == SkipRecon::CopyReference ? "copy-reference" : "intra-requant";
}

}  // namespace

const char* to_string(Command cmd) {
  switch (cmd) {
    case Command::Curves: return "curves";
    case Command::Corr: return "corr";
    case Command::CorrMap: return "corrmap";
    case Command::VpfMap: return "vpfmap";
    case Command::SignMap: return "signmap";
    case Command::SelfTest: return "selftest";
  }
  return "?";
}

std::vector<int> parse_q_list(const std::string& text) {
  if (trim(text).empty()) invalid("empty Q list");
  std::vector<int> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) invalid("empty entry in Q list '" + text + "'");
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(item, "Q list"));
      continue;
    }
    const int lo = to_int(trim(item.substr(0, dots)), "Q range");
    const int hi = to_int(trim(item.substr(dots + 2)), "Q range");
    if (hi < lo) invalid("empty Q range '" + item + "'");
    for (int q = lo; q <= hi; ++q) out.push_back(q);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  if (trim(text).empty()) invalid("empty list");
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) invalid("empty entry in list '" + text + "'");
    out.push_back(to_real(item, "list '" + text + "'"));
  }
  return out;
}

CliConfig parse_config(const std::vector<std::string>& args) {
  CliConfig cfg;
  SweepConfig& sw = cfg.sweep;

  CLI::App app{"Semi-analytic double-compression sweeps", "vpflab"};
  app.set_version_flag("--version", "vpflab 0.1.0");
  app.set_config("--config", "", "Flat key = value file; keys match flags");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  std::string q1 = "2..31";
  std::string q2 = "2..31";
  std::string alpha_i = "1,1.25,2";
  std::string kind = "intra";
  std::string which = "i1p2";
  std::string format = "csv";
  std::string pred = "first";
  std::string skip = "copy-reference";

  app.add_option("--q1", q1, "First-pass Q values (a..b or list)")
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->delimiter(',');
  app.add_option("--q2", q2, "Second-pass Q values (a..b or list)")
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->delimiter(',');
  app.add_option("--alpha-i", alpha_i, "Intra deadzone factors")
      ->multi_option_policy(CLI::MultiOptionPolicy::Join)
      ->delimiter(',');
  app.add_option("--alpha-p", sw.alpha_p, "Inter deadzone factor");
  app.add_option("--count", sw.count, "Samples per cell");
  app.add_option("--seed", sw.base_seed, "Base seed");
  app.add_option("--sigma-x2", sw.ar.sigma_x2, "Variance of x_{n-2}");
  app.add_option("--rho", sw.ar.rho, "AR(1) coefficient");
  app.add_option("--sigma-r2", sw.ar.sigma_r2, "Innovation variance");
  app.add_option("--rho-p", sw.ar.rho_p, "Prediction coefficient");
  app.add_option("--sigma-nu2", sw.ar.sigma_nu2, "Prediction noise variance");
  app.add_flag("--coupled-modes", sw.options.coupled_modes,
               "Share mode draws across recipe sites");
  app.add_flag("--reuse-nu", sw.options.reuse_nu_across_passes,
               "Reuse the first-pass nu in the second pass");
  app.add_option("--second-pass-pred", pred, "first | second");
  app.add_option("--skip-recon", skip, "copy-reference | intra-requant");
  app.add_option("--kind", kind, "Sign map centroid: intra | inter");
  app.add_option("--which", which, "Correlation map pair: i1p2 | p1p2");
  app.add_option("-o,--output", cfg.output_path, "Output file");
  app.add_option("--format", format, "csv | json");

  const std::pair<Command, const char*> subs[] = {
      {Command::Curves, "Var(e^I1) and Var(e^P1) against q1"},
      {Command::Corr, "First-pass correlations against q1"},
      {Command::CorrMap, "corr with e^P2_{n-1} over (q1, q2)"},
      {Command::VpfMap, "VPF variance difference over (q1, q2)"},
      {Command::SignMap, "sgn(d' - d) over (q1, q2)"},
      {Command::SelfTest, "Quantizer and distortion oracle checks"},
  };
  std::map<CLI::App*, Command> lookup;
  for (const auto& [cmd, desc] : subs) {
    lookup[app.add_subcommand(to_string(cmd), desc)] = cmd;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw CliError(kExitOk, app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw CliError(kExitOk, app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw CliError(kExitOk, "vpflab 0.1.0\n");
  } catch (const CLI::FileError& e) {
    throw CliError(kExitIo, e.what());
  } catch (const CLI::ParseError& e) {
    invalid(e.what());
  }

  for (auto* sub : app.get_subcommands()) cfg.command = lookup.at(sub);

  sw.q1_range = parse_q_list(q1);
  sw.q2_range = parse_q_list(q2);
  sw.alpha_i_set = parse_real_list(alpha_i);

  if (kind == "intra") {
    cfg.kind = CentroidKind::Intra;
  } else if (kind == "inter") {
    cfg.kind = CentroidKind::Inter;
  } else {
    invalid("--kind must be intra or inter, got '" + kind + "'");
  }
  if (which == "i1p2") {
    cfg.which = CorrPair::I1_vs_P2;
  } else if (which == "p1p2") {
    cfg.which = CorrPair::P1_vs_P2;
  } else {
    invalid("--which must be i1p2 or p1p2, got '" + which + "'");
  }
  if (format == "csv") {
    cfg.format = Format::Csv;
  } else if (format == "json") {
    cfg.format = Format::Json;
  } else {
    invalid("--format must be csv or json, got '" + format + "'");
  }
  if (pred == "first") {
    sw.options.second_pass_pred_source = PredSource::FirstRecon;
  } else if (pred == "second") {
    sw.options.second_pass_pred_source = PredSource::SecondRecon;
  } else {
    invalid("--second-pass-pred must be first or second, got '" + pred + "'");
  }
  if (skip == "copy-reference") {
    sw.options.skip_recon = SkipRecon::CopyReference;
  } else if (skip == "intra-requant") {
    sw.options.skip_recon = SkipRecon::IntraRequant;
  } else {
    invalid("--skip-recon must be copy-reference or intra-requant, got '" +
            skip + "'");
  }

  try {
    sw.validate();
    sw.ar.validate();
  } catch (const std::domain_error& e) {
    invalid(e.what());
  }
  return cfg;
}

unsigned threads_from_env() {
  const char* raw = std::getenv("VPFLAB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string text = raw;
  if (text == "max") return std::max(1u, std::thread::hardware_concurrency());
  const int n = to_int(text, "VPFLAB_THREADS");
  if (n < 0) invalid("VPFLAB_THREADS must be non-negative");
  return static_cast<unsigned>(n);
}

std::vector<StatMap> compute(const CliConfig& cfg) {
  const SweepConfig& sw = cfg.sweep;
  switch (cfg.command) {
    case Command::Curves: return variance_curves(sw);
    case Command::Corr: return corr_vs_q1(sw);
    case Command::CorrMap: return corr_map(sw, cfg.which);
    case Command::VpfMap: return vpf_map(sw);
    case Command::SignMap: {
      std::vector<StatMap> maps;
      for (double a : sw.alpha_i_set) {
        maps.push_back(
            sign_map(cfg.kind, a, sw.alpha_p, sw.q1_range, sw.q2_range,
                     cfg.kind == CentroidKind::Intra ? sw.options.weight_intra
                                                     : sw.options.weight_inter));
      }
      return maps;
    }
    case Command::SelfTest: break;
  }
  return {};
}

std::string metadata_line(const CliConfig& cfg) {
  const SweepConfig& sw = cfg.sweep;
  std::string s = "# vpflab 0.1.0 command=";
  s += to_string(cfg.command);
  s += " q1=" + join_q(sw.q1_range);
  s += " q2=" + join_q(sw.q2_range);
  s += " alpha_i=" + join_real(sw.alpha_i_set);
  s += " alpha_p=" + fmt_real(sw.alpha_p);
  s += " count=" + std::to_string(sw.count);
  s += " seed=" + std::to_string(sw.base_seed);
  s += " sigma_x2=" + fmt_real(sw.ar.sigma_x2);
  s += " rho=" + fmt_real(sw.ar.rho);
  s += " sigma_r2=" + fmt_real(sw.ar.sigma_r2);
  s += " rho_p=" + fmt_real(sw.ar.rho_p);
  s += " sigma_nu2=" + fmt_real(sw.ar.sigma_nu2);
  s += " coupled_modes=" + std::to_string(sw.options.coupled_modes);
  s += " reuse_nu=" + std::to_string(sw.options.reuse_nu_across_passes);
  s += std::string(" second_pass_pred=") +
       pred_name(sw.options.second_pass_pred_source);
  s += std::string(" skip_recon=") + skip_name(sw.options.skip_recon);
  s += std::string(" kind=") + kind_name(cfg.kind);
  s += std::string(" which=") + which_name(cfg.which);
  return s;
}

std::string render_csv(const CliConfig& cfg, const std::vector<StatMap>& maps) {
  const bool curves = !maps.empty() && maps.front().is_curve();
  std::string out = metadata_line(cfg) + "\n";
  out += curves ? "statistic,q1,alpha_i,alpha_p,count,seed,value\n"
                : "statistic,q1,q2,alpha_i,alpha_p,count,seed,value\n";
  for (const StatMap& m : maps) {
    const std::string head = statistic_name(m.statistic);
    const std::string tail = fmt_real(m.alpha_i) + "," + fmt_real(m.alpha_p) +
                             "," + std::to_string(m.count) + ",";
    for (std::size_t r = 0; r < m.q1_ticks.size(); ++r) {
      for (std::size_t c = 0; c < m.columns(); ++c) {
        const std::size_t i = r * m.columns() + c;
        out += head + "," + std::to_string(m.q1_ticks[r]) + ",";
        if (!m.is_curve()) out += std::to_string(m.q2_ticks[c]) + ",";
        out += tail + std::to_string(m.seeds[i]) + "," + fmt_real(m.values[i]);
        out += '\n';
      }
    }
  }
  return out;
}

std::string render_json(const CliConfig& cfg, const std::vector<StatMap>& maps) {
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata_line(cfg).substr(2);
  auto& records = doc["records"] = nlohmann::ordered_json::array();
  for (const StatMap& m : maps) {
    for (std::size_t r = 0; r < m.q1_ticks.size(); ++r) {
      for (std::size_t c = 0; c < m.columns(); ++c) {
        const std::size_t i = r * m.columns() + c;
        nlohmann::ordered_json rec;
        rec["statistic"] = statistic_name(m.statistic);
        rec["q1"] = m.q1_ticks[r];
        if (!m.is_curve()) rec["q2"] = m.q2_ticks[c];
        rec["alpha_i"] = m.alpha_i;
        rec["alpha_p"] = m.alpha_p;
        rec["count"] = m.count;
        rec["seed"] = m.seeds[i];
        rec["value"] = m.values[i];
        records.push_back(std::move(rec));
      }
    }
  }
  return doc.dump(1) + "\n";
}

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == Command::SelfTest) {
    bool ok = true;
    for (const CheckResult& r : run_selftest()) {
      char line[512];
      std::snprintf(line, sizeof line, "%s %s: %s (%.2fs)\n",
                    r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str(), r.seconds);
      out << line;
      ok = ok && r.passed;
    }
    return ok ? kExitOk : kExitFailure;
  }

  std::string text;
  try {
    const std::vector<StatMap> maps = compute(cfg);
    text = cfg.format == Format::Csv ? render_csv(cfg, maps)
                                     : render_json(cfg, maps);
  } catch (const std::domain_error& e) {
    err << "vpflab: invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "vpflab: pipeline error: " << e.what() << '\n';
    return kExitPipeline;
  }

  if (cfg.output_path.empty()) {
    out << text;
    out.flush();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "vpflab: cannot open '" << cfg.output_path << "' for writing\n";
    return kExitIo;
  }
  file << text;
  file.close();
  if (!file) {
    err << "vpflab: write to '" << cfg.output_path << "' failed\n";
    return kExitIo;
  }
  return kExitOk;
}

int main_entry(int argc, char** argv) {
  CliConfig cfg;
  try {
    cfg = parse_config(std::vector<std::string>(argv + 1, argv + argc));
    cfg.sweep.threads = threads_from_env();
  } catch (const CliError& e) {
    if (e.code() == kExitOk) {
      std::cout << e.what();
    } else {
      std::cerr << "vpflab: " << e.what() << '\n';
    }
    return e.code();
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace vpflab::cli
