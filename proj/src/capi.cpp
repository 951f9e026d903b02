#include "pcaforge/pcaforge.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "pcaforge/bounds.hpp"
#include "pcaforge/construct.hpp"
#include "pcaforge/core.hpp"
#include "pcaforge/coverage.hpp"
#include "pcaforge/io.hpp"

using namespace pcaforge;

struct pf_array {
  Array value;
};

struct pf_report {
  construct::BuildReport value;
  pf_array array;
};

namespace {

thread_local std::string g_last_error;

pf_status record(pf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
pf_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PF_OK;
  } catch (const Error& e) {
    return record(static_cast<pf_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(PF_ERR_CAPACITY_EXCEEDED, "out of memory");
  } catch (const std::exception& e) {
    return record(PF_ERR_INTERNAL, e.what());
  }
}

void require(const void* ptr, const char* what) {
  if (!ptr) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

PcaParams to_params(const pf_params* p) {
  require(p, "params");
  return {p->t, p->k, p->v, p->m, p->epsilon, p->seed};
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bounds::Formula to_formula(pf_formula f) {
  if (f < PF_FORMULA_UNION || f > PF_FORMULA_CONCAT) fail(ErrorCode::InvalidArgument, "unknown formula");
  return static_cast<bounds::Formula>(f);
}

construct::Algorithm to_algorithm(pf_algorithm a) {
  if (a < PF_ALG_MOSER_TARDOS || a > PF_ALG_DERANDOMIZED) {
    fail(ErrorCode::InvalidArgument, "unknown algorithm");
  }
  return static_cast<construct::Algorithm>(a);
}

}  // namespace

extern "C" {

const char* pf_status_name(pf_status status) {
  if (status == PF_ERR_INTERNAL) return "Internal";
  return error_name(static_cast<ErrorCode>(status));
}

const char* pf_last_error(void) { return g_last_error.c_str(); }

void pf_string_free(char* text) { std::free(text); }

pf_status pf_validate(const pf_params* params) {
  return guarded([&] { validate(to_params(params)); });
}

pf_status pf_tuple_rank(const uint16_t* tuple, int t, int v, uint64_t* out) {
  return guarded([&] {
    require(tuple, "tuple");
    require(out, "out");
    *out = tuple_rank(std::span<const Symbol>(tuple, static_cast<std::size_t>(t)), v);
  });
}

pf_status pf_tuple_unrank(uint64_t rank, int t, int v, uint16_t* out) {
  return guarded([&] {
    require(out, "out");
    const auto tuple = tuple_unrank(rank, t, v);
    std::copy(tuple.begin(), tuple.end(), out);
  });
}

pf_status pf_array_create(size_t rows, size_t cols, int v, const uint16_t* cells, pf_array** out) {
  return guarded([&] {
    require(out, "out");
    if (rows * cols > 0) require(cells, "cells");
    std::vector<Symbol> data(cells, cells + rows * cols);
    *out = new pf_array{Array(rows, cols, v, std::move(data))};
  });
}

void pf_array_free(pf_array* array) { delete array; }

size_t pf_array_rows(const pf_array* array) { return array ? array->value.rows() : 0; }
size_t pf_array_cols(const pf_array* array) { return array ? array->value.cols() : 0; }
int pf_array_v(const pf_array* array) { return array ? array->value.v() : 0; }

pf_status pf_array_get_cells(const pf_array* array, uint16_t* out, size_t capacity) {
  return guarded([&] {
    require(array, "array");
    const auto cells = array->value.cells();
    if (capacity < cells.size()) fail(ErrorCode::CapacityExceeded, "output buffer too small");
    if (!cells.empty()) require(out, "out");
    std::copy(cells.begin(), cells.end(), out);
  });
}

pf_status pf_array_read(const char* path, pf_array** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pf_array{io::read_array(path).array};
  });
}

pf_status pf_array_write(const pf_array* array, const char* path, int base) {
  return guarded([&] {
    require(array, "array");
    require(path, "path");
    io::write_array(array->value, path, {base, {}});
  });
}

pf_status pf_array_format(const pf_array* array, int base, char** out_text) {
  return guarded([&] {
    require(array, "array");
    require(out_text, "out_text");
    *out_text = copy_string(io::format_array(array->value, {base, {}}));
  });
}

pf_status pf_formula_parse(const char* name, pf_formula* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto f = bounds::parse_formula(name);
    if (!f) fail(ErrorCode::InvalidArgument, std::string("unknown formula '") + name + "'");
    *out = static_cast<pf_formula>(*f);
  });
}

const char* pf_formula_label(pf_formula formula) {
  if (formula < PF_FORMULA_UNION || formula > PF_FORMULA_CONCAT) return "unknown";
  return bounds::formula_label(static_cast<bounds::Formula>(formula));
}

pf_status pf_bound_eval(pf_formula formula, const pf_params* params, pf_bound* out) {
  return guarded([&] {
    require(out, "out");
    const auto r = bounds::evaluate(to_formula(formula), to_params(params));
    out->real_bound = r.real_bound;
    out->n_rows = r.n_rows;
    std::memset(out->source, 0, sizeof out->source);
    std::strncpy(out->source, r.source.c_str(), sizeof out->source - 1);
  });
}

pf_status pf_bound_asymptotic(const pf_params* params, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = bounds::pca_asymptotic(to_params(params));
  });
}

pf_status pf_bound_reference(int t, int k, int v, double* upper, double* lower) {
  return guarded([&] {
    require(upper, "upper");
    require(lower, "lower");
    const auto r = bounds::can_reference(t, k, v);
    *upper = r.upper;
    *lower = r.lower;
  });
}

pf_status pf_log_binomial(uint64_t n, uint64_t r, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = bounds::log_binomial(n, r);
  });
}

pf_status pf_sweep_csv(const pf_formula* formulas, size_t formula_count, pf_axis axis,
                       uint64_t first, uint64_t last, uint64_t step, const pf_params* fixed,
                       char** out_csv) {
  return guarded([&] {
    require(out_csv, "out_csv");
    if (formula_count > 0) require(formulas, "formulas");
    std::vector<bounds::Formula> list;
    for (size_t i = 0; i < formula_count; ++i) list.push_back(to_formula(formulas[i]));
    const auto sweep = bounds::sweep(list, axis == PF_AXIS_K ? bounds::Axis::K : bounds::Axis::M,
                                     first, last, step, to_params(fixed));
    *out_csv = copy_string(io::format_sweep_csv(sweep));
  });
}

pf_status pf_verify(const pf_array* array, int t, uint64_t m, double eps, double q,
                    pf_verify_result* out) {
  return guarded([&] {
    require(array, "array");
    require(out, "out");
    const Array& a = array->value;
    const auto profile = coverage::coverage_profile(a, t);
    const auto k = static_cast<int>(a.cols());
    const auto pca = coverage::is_pca(profile, k, m);
    *out = pf_verify_result{};
    out->tset_count = profile.counts.size();
    out->min_count = profile.min_count;
    out->defect_count = profile.defective(m).size();
    out->pca_ok = pca.ok ? 1 : 0;
    if (pca.witness) {
      out->has_witness = 1;
      out->witness_index = pca.witness->tset_index;
      out->witness_count = pca.witness->count;
      out->witness_missing = pca.witness->missing;
    }
    if (eps >= 0) {
      const auto apca = coverage::is_apca(profile, k, m, eps);
      out->allowed_defects = apca.allowed;
      out->apca_ok = apca.ok ? 1 : 0;
    } else {
      out->apca_ok = out->pca_ok;
    }
    out->completeness = q >= 0 ? coverage::completeness(profile, q) : -1.0;
  });
}

pf_status pf_coverage_counts(const pf_array* array, int t, uint32_t* out, size_t capacity,
                             size_t* written) {
  return guarded([&] {
    require(array, "array");
    require(written, "written");
    const auto profile = coverage::coverage_profile(array->value, t);
    if (capacity < profile.counts.size()) {
      *written = profile.counts.size();
      fail(ErrorCode::CapacityExceeded, "output buffer too small");
    }
    if (!profile.counts.empty()) require(out, "out");
    std::copy(profile.counts.begin(), profile.counts.end(), out);
    *written = profile.counts.size();
  });
}

pf_status pf_tset_columns(int k, int t, uint64_t index, size_t* out) {
  return guarded([&] {
    require(out, "out");
    if (t < 1 || t > k) fail(ErrorCode::StrengthTooSmall, "need 1 <= t <= k");
    if (index >= checked_binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t))) {
      fail(ErrorCode::RankOutOfRange, "t-set index >= C(k,t)");
    }
    const auto cols = coverage::tset_columns(k, t, index);
    std::copy(cols.begin(), cols.end(), out);
  });
}

pf_status pf_defects_csv(const pf_array* array, int t, uint64_t m, char** out_csv) {
  return guarded([&] {
    require(array, "array");
    require(out_csv, "out_csv");
    const auto report = coverage::is_apca(array->value, t, m, 1.0);
    *out_csv = copy_string(io::format_defects_csv(report.defects));
  });
}

pf_status pf_algorithm_parse(const char* name, pf_algorithm* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto a = construct::parse_algorithm(name);
    if (!a) fail(ErrorCode::InvalidArgument, std::string("unknown algorithm '") + name + "'");
    *out = static_cast<pf_algorithm>(*a);
  });
}

pf_status pf_build(pf_algorithm algorithm, const pf_params* params, uint64_t resample_cap,
                   uint64_t restart_cap, pf_report** out) {
  return guarded([&] {
    require(out, "out");
    construct::BuildOptions options;
    if (resample_cap) options.resample_cap = resample_cap;
    if (restart_cap) options.restart_cap = restart_cap;
    auto built = construct::build(to_algorithm(algorithm), to_params(params), options);
    auto* report = new pf_report{std::move(built), {}};
    report->array.value = report->value.array;
    *out = report;
  });
}

void pf_report_free(pf_report* report) { delete report; }

const pf_array* pf_report_array(const pf_report* report) {
  return report ? &report->array : nullptr;
}

uint64_t pf_report_iterations(const pf_report* report) {
  return report ? report->value.iterations : 0;
}

pf_status pf_report_json(const pf_report* report, char** out_json) {
  return guarded([&] {
    require(report, "report");
    require(out_json, "out_json");
    *out_json = copy_string(io::format_report_json(report->value));
  });
}

}  // extern "C"
