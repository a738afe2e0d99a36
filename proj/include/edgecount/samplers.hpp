#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgecount/construct.hpp"
#include "edgecount/rng.hpp"

namespace edgecount {

enum class Family {
  gaussian,
  student_t,          // multivariate t with one shared chi-square mixing draw per observation
  uniform_cube,       // iid Uniform[-w, w] coordinates
  iid_exponential,    // iid Exp(1) coordinates
  cauchy_t1,          // student_t with nu = 1
  gaussian_t_halves,  // first floor(d/2) coordinates Gaussian, the rest multivariate t
};

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

struct Covariance {
  enum class Kind { identity, ar, custom };
  Kind kind = Kind::identity;
  double rho = 0.0;            // for ar: Sigma_ij = rho^|i-j|
  std::vector<double> matrix;  // for custom: d x d row-major, symmetric positive definite

  static Covariance identity() { return {}; }
  static Covariance ar(double rho) { return {Kind::ar, rho, {}}; }
  static Covariance custom(std::vector<double> m) { return {Kind::custom, 0.0, std::move(m)}; }
};

/// Dense rho^|i-j| matrix, row-major.
std::vector<double> ar_matrix(std::size_t d, double rho);

/// Multiplies by the lower Cholesky factor L of Sigma (Sigma = L L^T). The AR
/// case uses the recursion x_1 = u_1, x_k = rho x_{k-1} + sqrt(1 - rho^2) u_k,
/// which is exactly L u; the custom case factors Sigma once up front.
class CovarianceFactor {
 public:
  /// Throws std::invalid_argument if |rho| >= 1, the matrix has the wrong
  /// size, is not symmetric, or is not positive definite.
  CovarianceFactor(const Covariance& cov, std::size_t d);
  void apply(std::span<const double> u, std::span<double> out) const;
  std::size_t dim() const noexcept { return d_; }

 private:
  Covariance::Kind kind_;
  std::size_t d_;
  double rho_ = 0.0;
  std::vector<double> lower_;  // row-major lower triangle (custom only)
};

/// Distribution of the underlying vectors U (sample X) or V (sample Y).
struct SampleLaw {
  Family family = Family::gaussian;
  double nu = 5.0;                  // student_t / gaussian_t_halves degrees of freedom
  double uniform_half_width = 1.0;  // uniform_cube support [-w, w]
  Covariance cov;
};

/// X_i = L_x U_i and Y_j = (1 + a d^{-1/3}) L_y V_j - b d^{-1/3} 1_d.
struct ScenarioSpec {
  std::size_t d = 1;
  SampleLaw x;
  SampleLaw y;
  double a = 0.0;
  double b = 0.0;
  std::string name;
};

void validate(const ScenarioSpec& spec);

/// Draws one vector from the law (before the covariance factor) into out.
void draw_base(const SampleLaw& law, Rng& rng, std::span<double> out);

/// n iid draws of L U with U from the law.
PointCloud sample_law(const SampleLaw& law, std::size_t n, std::size_t d, std::uint64_t seed);

/// Returns (X, Y) with m and n rows. Deterministic in seed.
std::pair<PointCloud, PointCloud> sample_scenario(const ScenarioSpec& spec, std::size_t m, std::size_t n,
                                                  std::uint64_t seed);

/// Both samples from the same law under AR(0.5) covariance, for size studies.
/// Names: "normal", "t5", "uniform" (coordinates on [-1, 1]), "exp".
ScenarioSpec size_distribution(std::string_view name, std::size_t d);

/// Alternatives for power studies, numbered 1..9. Settings 1-4 use AR(0.5)
/// covariance for both samples with a Y-side scale and shift (uniform
/// coordinates on [-0.5, 0.5]); 5-9 are the mean-only, scale-only,
/// covariance-only, Gaussian versus partly-t, and Cauchy alternatives.
ScenarioSpec power_scenario(int number, std::size_t d);

}  // namespace edgecount
