#include "edgecount/json_io.hpp"

#include <cmath>

namespace edgecount {

namespace {

template <class T>
Json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) return number_or_null(*v);
  return *v;
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const PermNullMoments& m) {
  return Json{{"mu_w", m.mu_w},       {"sigma_w", m.sigma_w}, {"mu_d", m.mu_d},
              {"sigma_d", m.sigma_d}, {"mu_o", m.mu_o},       {"sigma_o", m.sigma_o},
              {"sigma_w_clipped", m.sigma_w_clipped}};
}

Json to_json(const BootNullMoments& m) {
  return Json{{"mu_w_b", m.mu_w_b},       {"sigma_w_b", m.sigma_w_b}, {"mu_d_b", m.mu_d_b},
              {"sigma_d_b", m.sigma_d_b}, {"sigma_nx", m.sigma_nx},   {"cov_zw_zd", m.cov_zw_zd},
              {"cov_zw_zx", m.cov_zw_zx}, {"cov_zd_zx", m.cov_zd_zx}};
}

Json to_json(const TestResult& r) {
  Json j;
  j["test"] = std::string(to_string(r.test));
  j["statistic"] = number_or_null(r.statistic);
  j["p_value"] = r.p_value;
  j["method"] = std::string(to_string(r.method));
  j["m"] = r.sizes.m;
  j["n"] = r.sizes.n;
  j["counts"] = Json{{"r1", r.counts.r1}, {"r2", r.counts.r2}, {"r_w", r.counts.r_w}, {"r_d", r.counts.r_d}};
  j["moments"] = to_json(r.moments);
  j["z_o"] = number_or_null(r.z_o);
  j["z_w"] = number_or_null(r.z_w);
  j["z_d"] = opt(r.z_d);
  j["degenerate"] = r.degenerate;
  j["met_abs_zd"] = r.met_abs_zd;
  j["n_permutations"] = opt(r.n_permutations);
  j["seed"] = opt(r.seed);
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["num_nodes"] = r.num_nodes;
  j["num_edges"] = r.num_edges;
  j["v_g"] = r.v_g;
  j["regular"] = r.v_g == 0.0;
  j["max_degree"] = r.max_degree;
  j["squares_all_cycles"] = r.squares;
  j["squares_induced"] = opt(r.squares_induced);
  j["c1_ratio_a"] = number_or_null(r.c1_ratio_a);
  j["c1_ratio_b"] = number_or_null(r.c1_ratio_b);
  j["c2_ratio_a"] = opt(r.c2_ratio_a);
  j["c2_ratio_b"] = opt(r.c2_ratio_b);
  j["c2_ratio_c"] = opt(r.c2_ratio_c);
  j["c3_ratio"] = opt(r.c3_ratio);
  j["c4_ratio_a"] = number_or_null(r.c4_ratio_a);
  j["c4_ratio_b"] = number_or_null(r.c4_ratio_b);
  j["c4_ratio_c"] = number_or_null(r.c4_ratio_c);
  j["legacy_ae2"] = number_or_null(r.legacy_ae2);
  j["legacy_aebe"] = number_or_null(r.legacy_aebe);
  j["legacy_gi2_over_n"] = number_or_null(r.legacy_gi2_over_n);
  j["crosspair"] = r.crosspair;
  j["sum_ae2"] = r.sum_ae2;
  j["sum_aebe"] = r.sum_aebe;
  j["degree_dist"] = Json{{"mean", r.degree_mean}, {"variance", r.degree_var}, {"third_moment", r.degree_third_moment}};
  return j;
}

Json to_json(const SteinBoundEstimate& e) {
  return Json{{"var_w", e.var_w},     {"term_a1", e.term_a1}, {"term_a2", e.term_a2}, {"term_a3", e.term_a3},
              {"bound", e.bound},     {"mc_se", e.mc_se},     {"se_a2", e.se_a2},     {"se_a3", e.se_a3},
              {"w_mean", e.w_mean},   {"w_var", e.w_var},     {"n_samples", e.n_samples}, {"seed", e.seed}};
}

}  // namespace edgecount
