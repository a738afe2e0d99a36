#include "edgecount/samplers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <random>
#include <stdexcept>

namespace edgecount {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::student_t: return "student_t";
    case Family::uniform_cube: return "uniform_cube";
    case Family::iid_exponential: return "iid_exponential";
    case Family::cauchy_t1: return "cauchy_t1";
    case Family::gaussian_t_halves: return "gaussian_t_halves";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  constexpr Family all[] = {Family::gaussian,        Family::student_t, Family::uniform_cube,
                            Family::iid_exponential, Family::cauchy_t1, Family::gaussian_t_halves};
  for (Family f : all)
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

std::vector<double> ar_matrix(std::size_t d, double rho) {
  std::vector<double> m(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m[i * d + j] = std::pow(rho, static_cast<double>(i > j ? i - j : j - i));
  return m;
}

CovarianceFactor::CovarianceFactor(const Covariance& cov, std::size_t d) : kind_(cov.kind), d_(d) {
  if (d == 0) throw std::invalid_argument("dimension must be positive");
  switch (cov.kind) {
    case Covariance::Kind::identity: break;
    case Covariance::Kind::ar:
      if (!(std::abs(cov.rho) < 1.0)) throw std::invalid_argument("AR covariance needs |rho| < 1");
      rho_ = cov.rho;
      break;
    case Covariance::Kind::custom: {
      if (cov.matrix.size() != d * d)
        throw std::invalid_argument("custom covariance must be " + std::to_string(d) + " x " + std::to_string(d));
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
          cov.matrix.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      if (!m.isApprox(m.transpose(), 1e-12)) throw std::invalid_argument("custom covariance is not symmetric");
      Eigen::LLT<Eigen::MatrixXd> llt(m);
      if (llt.info() != Eigen::Success) throw std::invalid_argument("custom covariance is not positive definite");
      const Eigen::MatrixXd l = llt.matrixL();
      lower_.assign(d * d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j <= i; ++j)
          lower_[i * d + j] = l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      break;
    }
  }
}

void CovarianceFactor::apply(std::span<const double> u, std::span<double> out) const {
  switch (kind_) {
    case Covariance::Kind::identity:
      std::copy(u.begin(), u.end(), out.begin());
      break;
    case Covariance::Kind::ar: {
      const double s = std::sqrt(1.0 - rho_ * rho_);
      out[0] = u[0];
      for (std::size_t k = 1; k < d_; ++k) out[k] = rho_ * out[k - 1] + s * u[k];
      break;
    }
    case Covariance::Kind::custom:
      for (std::size_t i = 0; i < d_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += lower_[i * d_ + j] * u[j];
        out[i] = acc;
      }
      break;
  }
}

namespace {

void validate_law(const SampleLaw& law, std::size_t d) {
  const bool uses_nu = law.family == Family::student_t || law.family == Family::gaussian_t_halves;
  if (uses_nu && !(law.nu > 0.0 && std::isfinite(law.nu)))
    throw std::invalid_argument("degrees of freedom must be positive");
  if (law.family == Family::uniform_cube && !(law.uniform_half_width > 0.0 && std::isfinite(law.uniform_half_width)))
    throw std::invalid_argument("uniform half-width must be positive");
  CovarianceFactor check(law.cov, d);
}

// Z / sqrt(W / nu) with a single W ~ chi-square(nu) shared by the block.
void draw_t_block(double nu, Rng& rng, std::span<double> out) {
  std::normal_distribution<double> z;
  std::chi_squared_distribution<double> w(nu);
  const double scale = 1.0 / std::sqrt(w(rng) / nu);
  for (double& v : out) v = z(rng) * scale;
}

}  // namespace

void validate(const ScenarioSpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (!std::isfinite(spec.a) || !std::isfinite(spec.b)) throw std::invalid_argument("a and b must be finite");
  validate_law(spec.x, spec.d);
  validate_law(spec.y, spec.d);
}

void draw_base(const SampleLaw& law, Rng& rng, std::span<double> out) {
  switch (law.family) {
    case Family::gaussian: {
      std::normal_distribution<double> z;
      for (double& v : out) v = z(rng);
      break;
    }
    case Family::student_t: draw_t_block(law.nu, rng, out); break;
    case Family::cauchy_t1: draw_t_block(1.0, rng, out); break;
    case Family::uniform_cube: {
      std::uniform_real_distribution<double> u(-law.uniform_half_width, law.uniform_half_width);
      for (double& v : out) v = u(rng);
      break;
    }
    case Family::iid_exponential: {
      std::exponential_distribution<double> e(1.0);
      for (double& v : out) v = e(rng);
      break;
    }
    case Family::gaussian_t_halves: {
      const std::size_t half = out.size() / 2;
      std::normal_distribution<double> z;
      for (std::size_t k = 0; k < half; ++k) out[k] = z(rng);
      draw_t_block(law.nu, rng, out.subspan(half));
      break;
    }
  }
}

PointCloud sample_law(const SampleLaw& law, std::size_t n, std::size_t d, std::uint64_t seed) {
  validate_law(law, d);
  const CovarianceFactor l(law.cov, d);
  Rng rng(derive_seed(seed, 0));
  std::vector<double> u(d);
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    draw_base(law, rng, u);
    l.apply(u, std::span<double>(values.data() + i * d, d));
  }
  return PointCloud(n, d, std::move(values));
}

std::pair<PointCloud, PointCloud> sample_scenario(const ScenarioSpec& spec, std::size_t m, std::size_t n,
                                                  std::uint64_t seed) {
  validate(spec);
  const std::size_t d = spec.d;
  const CovarianceFactor lx(spec.x.cov, d);
  const CovarianceFactor ly(spec.y.cov, d);
  const double step = std::pow(static_cast<double>(d), -1.0 / 3.0);
  const double scale = 1.0 + spec.a * step;
  const double shift = spec.b * step;

  Rng rng(derive_seed(seed, 0));
  std::vector<double> u(d);
  std::vector<double> xs(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    draw_base(spec.x, rng, u);
    lx.apply(u, std::span<double>(xs.data() + i * d, d));
  }
  std::vector<double> ys(n * d);
  for (std::size_t j = 0; j < n; ++j) {
    draw_base(spec.y, rng, u);
    std::span<double> row(ys.data() + j * d, d);
    ly.apply(u, row);
    for (double& v : row) v = scale * v - shift;
  }
  return {PointCloud(m, d, std::move(xs)), PointCloud(n, d, std::move(ys))};
}

ScenarioSpec size_distribution(std::string_view name, std::size_t d) {
  ScenarioSpec s;
  s.d = d;
  s.name = std::string(name);
  SampleLaw law;
  law.cov = Covariance::ar(0.5);
  if (name == "normal") {
    law.family = Family::gaussian;
  } else if (name == "t5") {
    law.family = Family::student_t;
    law.nu = 5.0;
  } else if (name == "uniform") {
    law.family = Family::uniform_cube;
    law.uniform_half_width = 1.0;
  } else if (name == "exp") {
    law.family = Family::iid_exponential;
  } else {
    throw std::invalid_argument("unknown size distribution '" + std::string(name) +
                                "' (expected normal, t5, uniform or exp)");
  }
  s.x = law;
  s.y = law;
  return s;
}

ScenarioSpec power_scenario(int number, std::size_t d) {
  ScenarioSpec s;
  s.d = d;
  s.name = "scenario" + std::to_string(number);
  SampleLaw ar;
  ar.cov = Covariance::ar(0.5);
  s.x = ar;
  s.y = ar;
  switch (number) {
    case 1: s.a = 0.17; s.b = 0.17; break;
    case 2: s.a = 0.1; s.b = 0.6; break;
    case 3:
      s.x.family = s.y.family = Family::student_t;
      s.x.nu = s.y.nu = 5.0;
      s.a = 0.25;
      s.b = 0.25;
      break;
    case 4:
      s.x.family = s.y.family = Family::uniform_cube;
      s.x.uniform_half_width = s.y.uniform_half_width = 0.5;
      s.a = 0.12;
      s.b = 0.1;
      break;
    case 5: s.b = -0.6; break;  // Y mean +0.6 d^{-1/3}
    case 6: s.a = 0.17; break;
    case 7:
      s.x.cov = Covariance::identity();
      s.y.cov = Covariance::ar(0.4);
      break;
    case 8:
      s.x.cov = Covariance::identity();
      s.y.cov = Covariance::identity();
      s.y.family = Family::gaussian_t_halves;
      s.y.nu = 30.0;
      break;
    case 9:
      s.x.family = s.y.family = Family::cauchy_t1;
      s.x.cov = Covariance::identity();
      s.a = 0.17;
      s.b = -0.6;
      break;
    default: throw std::invalid_argument("power scenario must be in 1..9");
  }
  return s;
}

}  // namespace edgecount
