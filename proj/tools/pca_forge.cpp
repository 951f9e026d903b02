// pca-forge: bounds, generation, verification and bound comparison for
// partial and almost-partial covering arrays. Talks to the library only
// through the C API.
//
// Exit codes: 0 success / property holds, 1 property violated,
//             2 usage or validation error, 3 iteration cap reached.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcaforge/pcaforge.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIterationCap = 3;

struct ArrayDeleter {
  void operator()(pf_array* a) const { pf_array_free(a); }
};
struct ReportDeleter {
  void operator()(pf_report* r) const { pf_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { pf_string_free(s); }
};
using ArrayPtr = std::unique_ptr<pf_array, ArrayDeleter>;
using ReportPtr = std::unique_ptr<pf_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

/// Thrown to unwind with a specific exit code after printing a message.
struct Exit {
  int code;
};

int exit_code_for(pf_status s) {
  return s == PF_ERR_ITERATION_CAP ? kExitIterationCap : kExitUsage;
}

void check(pf_status s) {
  if (s == PF_OK) return;
  std::cerr << "error: " << pf_last_error() << "\n";
  throw Exit{exit_code_for(s)};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write " << path << "\n";
    throw Exit{kExitUsage};
  }
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PCAFORGE_SEED")) {
    char* end = nullptr;
    const unsigned long long s = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return s;
    std::cerr << "warning: ignoring non-numeric PCAFORGE_SEED\n";
  }
  return 0;
}

std::uint64_t full_tuples(int t, int v) {
  std::uint64_t out = 1;
  for (int i = 0; i < t; ++i) out *= static_cast<std::uint64_t>(v);
  return out;
}

struct ParamFlags {
  int t = 0;
  int k = 0;
  int v = 0;
  std::optional<std::uint64_t> m;
  double eps = 0.0;
  std::uint64_t seed = 0;

  pf_params resolve() const {
    pf_params p{t, k, v, 0, eps, seed};
    p.m = m ? *m : (t >= 1 && v >= 1 && t <= 64 ? full_tuples(t, v) : 0);
    return p;
  }
};

void add_param_flags(CLI::App* app, ParamFlags& f, bool k_required = true) {
  app->add_option("--t", f.t, "strength")->required();
  auto* k = app->add_option("--k", f.k, "number of columns");
  if (k_required) k->required();
  app->add_option("--v", f.v, "alphabet size")->required();
  app->add_option("--m", f.m, "distinct tuples required per t-set (default v^t)");
  app->add_option("--eps", f.eps, "allowed fraction of defective t-sets");
}

pf_formula with_variant(pf_formula f, const std::string& variant) {
  if (f == PF_FORMULA_PCA_CYCLIC && variant == "with-t") return PF_FORMULA_PCA_CYCLIC_WITH_T;
  return f;
}

std::vector<pf_formula> parse_formulas(const std::vector<std::string>& names,
                                       const std::string& variant) {
  std::vector<pf_formula> out;
  for (const auto& name : names) {
    pf_formula f{};
    check(pf_formula_parse(name.c_str(), &f));
    out.push_back(with_variant(f, variant));
  }
  return out;
}

// --- bounds ---------------------------------------------------------------

struct BoundsCmd {
  ParamFlags params;
  bool all = false;
  bool csv = false;
  std::vector<std::string> formulas;
  std::string variant = "as-printed";
};

int run_bounds(const BoundsCmd& cmd) {
  const pf_params p = cmd.params.resolve();
  check(pf_validate(&p));

  const bool explicit_list = !cmd.formulas.empty() && !cmd.all;
  std::vector<pf_formula> list;
  if (explicit_list) {
    list = parse_formulas(cmd.formulas, cmd.variant);
  } else {
    list = {PF_FORMULA_UNION,       PF_FORMULA_LLL,           PF_FORMULA_APCA,
            PF_FORMULA_APCA_ALGORITHM, PF_FORMULA_APCA_CYCLIC, PF_FORMULA_APCA_FROBENIUS,
            with_variant(PF_FORMULA_PCA_CYCLIC, cmd.variant), PF_FORMULA_CONCAT};
  }

  if (cmd.csv) {
    std::cout << "formula,real_bound,n_rows,feasible\n";
  } else {
    std::printf("%-20s %14s %10s\n", "formula", "real_bound", "n_rows");
  }
  for (pf_formula f : list) {
    pf_bound b{};
    const pf_status s = pf_bound_eval(f, &p, &b);
    if (s != PF_OK) {
      if (explicit_list) check(s);
      if (cmd.csv) {
        std::cout << pf_formula_label(f) << ",,,0\n";
      } else {
        std::printf("%-20s %14s %10s  (%s)\n", pf_formula_label(f), "-", "-", pf_status_name(s));
      }
      continue;
    }
    if (cmd.csv) {
      std::cout << b.source << ',' << fmt_real(b.real_bound) << ',' << b.n_rows << ",1\n";
    } else {
      std::printf("%-20s %14s %10llu\n", b.source, fmt_real(b.real_bound).c_str(),
                  static_cast<unsigned long long>(b.n_rows));
    }
  }

  if (!explicit_list && !cmd.csv) {
    double upper = 0, lower = 0;
    if (pf_bound_reference(p.t, p.k, p.v, &upper, &lower) == PF_OK) {
      std::printf("reference CAN upper (t-1)v^t log2 k = %s, lower v^(t-1) log2 k = %s\n",
                  fmt_real(upper).c_str(), fmt_real(lower).c_str());
    }
    double asym = 0;
    if (pf_bound_asymptotic(&p, &asym) == PF_OK) {
      std::printf("large-k approximation of lll = %s\n", fmt_real(asym).c_str());
    }
  }
  return kExitOk;
}

// --- generate -------------------------------------------------------------

struct GenerateCmd {
  ParamFlags params;
  std::string algorithm;
  std::string out;
  std::string report;
  int base = 0;
  std::uint64_t resample_cap = 0;
  std::uint64_t restart_cap = 0;
};

int run_generate(const GenerateCmd& cmd) {
  pf_algorithm alg{};
  check(pf_algorithm_parse(cmd.algorithm.c_str(), &alg));
  const pf_params p = cmd.params.resolve();
  check(pf_validate(&p));

  pf_report* raw = nullptr;
  check(pf_build(alg, &p, cmd.resample_cap, cmd.restart_cap, &raw));
  ReportPtr report(raw);
  const pf_array* array = pf_report_array(report.get());

  // Re-verify through the public API before anything is written.
  pf_verify_result vr{};
  bool ok = false;
  if (alg == PF_ALG_CONCAT) {
    check(pf_verify(array, p.t, p.m, -1.0, -1.0, &vr));
    pf_verify_result full{};
    check(pf_verify(array, p.t, full_tuples(p.t, p.v), p.epsilon, -1.0, &full));
    ok = vr.pca_ok && full.apca_ok;
  } else if (alg == PF_ALG_MOSER_TARDOS) {
    check(pf_verify(array, p.t, p.m, -1.0, -1.0, &vr));
    ok = vr.pca_ok;
  } else {
    check(pf_verify(array, p.t, p.m, p.epsilon, -1.0, &vr));
    ok = vr.apca_ok;
  }

  check(pf_array_write(array, cmd.out.c_str(), cmd.base));
  char* json = nullptr;
  check(pf_report_json(report.get(), &json));
  StringPtr json_owner(json);
  if (!cmd.report.empty()) write_output(cmd.report, json);

  std::printf("algorithm=%s rows=%zu cols=%zu iterations=%llu verified=%s\n", cmd.algorithm.c_str(),
              pf_array_rows(array), pf_array_cols(array),
              static_cast<unsigned long long>(pf_report_iterations(report.get())),
              ok ? "yes" : "no");
  return ok ? kExitOk : kExitViolated;
}

// --- verify ---------------------------------------------------------------

struct VerifyCmd {
  std::string in;
  int t = 0;
  std::optional<std::uint64_t> m;
  std::optional<double> eps;
  std::optional<double> q;
  std::string defects;
};

int run_verify(const VerifyCmd& cmd) {
  pf_array* raw = nullptr;
  check(pf_array_read(cmd.in.c_str(), &raw));
  ArrayPtr array(raw);
  const int v = pf_array_v(array.get());
  const auto k = static_cast<int>(pf_array_cols(array.get()));
  const std::uint64_t m = cmd.m ? *cmd.m : full_tuples(cmd.t, v);

  pf_verify_result r{};
  check(pf_verify(array.get(), cmd.t, m, cmd.eps ? *cmd.eps : -1.0, cmd.q ? *cmd.q : -1.0, &r));

  std::printf("rows %zu cols %d v %d t %d m %llu\n", pf_array_rows(array.get()), k, v, cmd.t,
              static_cast<unsigned long long>(m));
  std::printf("tsets %llu\n", static_cast<unsigned long long>(r.tset_count));
  std::printf("min_count %u\n", r.min_count);
  std::printf("defects %llu\n", static_cast<unsigned long long>(r.defect_count));
  if (cmd.q) std::printf("completeness(q=%s) %s\n", fmt_real(*cmd.q).c_str(), fmt_real(r.completeness).c_str());

  if (!cmd.defects.empty()) {
    char* csv = nullptr;
    check(pf_defects_csv(array.get(), cmd.t, m, &csv));
    StringPtr owner(csv);
    write_output(cmd.defects, csv);
  }

  const bool almost = cmd.eps.has_value();
  const bool holds = almost ? r.apca_ok : r.pca_ok;
  if (almost) {
    std::printf("allowed_defects %llu\n", static_cast<unsigned long long>(r.allowed_defects));
  }
  if (holds) {
    std::printf("status %s holds\n", almost ? "apca" : "pca");
    return kExitOk;
  }
  std::printf("status %s violated\n", almost ? "apca" : "pca");
  if (r.has_witness) {
    std::vector<size_t> cols(static_cast<std::size_t>(cmd.t));
    check(pf_tset_columns(k, cmd.t, r.witness_index, cols.data()));
    std::printf("witness columns (");
    for (std::size_t i = 0; i < cols.size(); ++i) std::printf(i ? ",%zu" : "%zu", cols[i]);
    std::printf(") count %u missing %llu\n", r.witness_count,
                static_cast<unsigned long long>(r.witness_missing));
  }
  return kExitViolated;
}

// --- compare --------------------------------------------------------------

struct CompareCmd {
  std::string figure;
  std::string axis;
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  std::uint64_t step = 1;
  int t = 0;
  int k = 0;
  int v = 0;
  std::uint64_t m = 0;
  double eps = 0.0;
  std::vector<std::string> formulas;
  std::string variant = "as-printed";
  std::string out;
};

int run_compare(const CompareCmd& cmd) {
  pf_params fixed{};
  pf_axis axis = PF_AXIS_M;
  std::uint64_t first = 0, last = 0, step = cmd.step;
  const bool custom = !cmd.axis.empty();
  if (!cmd.figure.empty() && custom) {
    std::cerr << "error: --figure and --axis are mutually exclusive\n";
    return kExitUsage;
  }
  if (cmd.figure == "1a") {
    // t=6, k=20, v=4, m over [v^t - 6v + 1, v^t]
    fixed = {6, 20, 4, 0, 0.0, 0};
    axis = PF_AXIS_M;
    first = 4096 - 24 + 1;
    last = 4096;
    step = 1;
  } else if (cmd.figure == "1b") {
    // t=6, v=4, m = v^t - v; k from 2t = 12 to 60 in steps of 4
    fixed = {6, 0, 4, 4092, 0.0, 0};
    axis = PF_AXIS_K;
    first = 12;
    last = 60;
    step = 4;
  } else if (!cmd.figure.empty()) {
    std::cerr << "error: unknown figure preset '" << cmd.figure << "' (expected 1a or 1b)\n";
    return kExitUsage;
  } else if (custom) {
    if (cmd.axis != "m" && cmd.axis != "k") {
      std::cerr << "error: --axis must be m or k\n";
      return kExitUsage;
    }
    axis = cmd.axis == "m" ? PF_AXIS_M : PF_AXIS_K;
    fixed = {cmd.t, cmd.k, cmd.v, cmd.m, cmd.eps, 0};
    first = cmd.from;
    last = cmd.to;
  } else {
    std::cerr << "error: pass --figure 1a|1b or a custom --axis sweep\n";
    return kExitUsage;
  }

  const std::vector<std::string> names =
      cmd.formulas.empty() ? std::vector<std::string>{"lll", "pca-cyclic"} : cmd.formulas;
  const auto formulas = parse_formulas(names, cmd.variant);
  char* csv = nullptr;
  check(pf_sweep_csv(formulas.data(), formulas.size(), axis, first, last, step, &fixed, &csv));
  StringPtr owner(csv);
  write_output(cmd.out, csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pca-forge: partial and almost-partial covering arrays"};
  app.require_subcommand(1);

  BoundsCmd bounds_cmd;
  auto* bounds = app.add_subcommand("bounds", "evaluate existence bounds");
  add_param_flags(bounds, bounds_cmd.params);
  bounds->add_flag("--all", bounds_cmd.all, "evaluate every formula (default)");
  bounds->add_option("--formula", bounds_cmd.formulas,
                     "formula label: union|lll|apca|apca-algorithm|apca-cyclic|apca-frobenius|"
                     "pca-cyclic|concat (aliases eq5, eq6, eq8)");
  bounds->add_option("--eq8-variant", bounds_cmd.variant, "pca-cyclic form")
      ->check(CLI::IsMember({"as-printed", "with-t"}));
  bounds->add_flag("--csv", bounds_cmd.csv, "CSV instead of a table");

  GenerateCmd gen_cmd;
  gen_cmd.params.seed = default_seed();
  auto* generate = app.add_subcommand("generate", "construct and verify an array");
  generate->add_option("--alg", gen_cmd.algorithm, "mt|apca|cyclic|frobenius|concat|derand")->required();
  add_param_flags(generate, gen_cmd.params);
  generate->add_option("--seed", gen_cmd.params.seed, "RNG seed (default $PCAFORGE_SEED or 0)");
  generate->add_option("--out", gen_cmd.out, "array output path")->required();
  generate->add_option("--report", gen_cmd.report, "JSON build report path ('-' for stdout)");
  generate->add_option("--base", gen_cmd.base, "symbol base written to the file")
      ->check(CLI::IsMember({0, 1}));
  generate->add_option("--resample-cap", gen_cmd.resample_cap, "Moser-Tardos resample cap");
  generate->add_option("--restart-cap", gen_cmd.restart_cap, "restart cap for sampling loops");

  VerifyCmd verify_cmd;
  auto* verify = app.add_subcommand("verify", "check coverage of an array file");
  verify->add_option("--in", verify_cmd.in, "array file")->required();
  verify->add_option("--t", verify_cmd.t, "strength")->required();
  verify->add_option("--m", verify_cmd.m, "required distinct tuples (default v^t)");
  verify->add_option("--eps", verify_cmd.eps, "check the almost-covering property");
  verify->add_option("--q", verify_cmd.q, "report (q,t)-completeness")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--defects", verify_cmd.defects, "write defective t-sets as CSV");

  CompareCmd cmp_cmd;
  auto* compare = app.add_subcommand("compare", "sweep bounds and emit CSV");
  compare->add_option("--figure", cmp_cmd.figure, "preset: 1a (m sweep) or 1b (k sweep)");
  compare->add_option("--axis", cmp_cmd.axis, "custom sweep axis: m or k");
  compare->add_option("--from", cmp_cmd.from, "first axis value");
  compare->add_option("--to", cmp_cmd.to, "last axis value");
  compare->add_option("--step", cmp_cmd.step, "axis step");
  compare->add_option("--t", cmp_cmd.t, "strength");
  compare->add_option("--k", cmp_cmd.k, "columns");
  compare->add_option("--v", cmp_cmd.v, "alphabet size");
  compare->add_option("--m", cmp_cmd.m, "coverage target");
  compare->add_option("--eps", cmp_cmd.eps, "defect tolerance");
  compare->add_option("--formula", cmp_cmd.formulas, "formulas to compare (default lll pca-cyclic)");
  compare->add_option("--eq8-variant", cmp_cmd.variant, "pca-cyclic form")
      ->check(CLI::IsMember({"as-printed", "with-t"}));
  compare->add_option("--out", cmp_cmd.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bounds) return run_bounds(bounds_cmd);
    if (*generate) return run_generate(gen_cmd);
    if (*verify) return run_verify(verify_cmd);
    if (*compare) return run_compare(cmp_cmd);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
