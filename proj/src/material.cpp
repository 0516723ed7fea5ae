#include "chb/material.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>

namespace chb {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite, got " +
                                std::to_string(v));
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

void require_spd(const Voigt& c, const char* name) {
  if (!c.allFinite() || (c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * c.cwiseAbs().maxCoeff() ||
      Eigen::LLT<Voigt>(c).info() != Eigen::Success) {
    throw std::invalid_argument(std::string(name) + " must be symmetric positive definite");
  }
}

const VoigtVector kIdentity{1.0, 1.0, 0.0};

double blend(double minus, double plus, double w) { return minus + w * (plus - minus); }

std::pair<double, double> endpoints(const MaterialTable& mat, Coefficient which) {
  switch (which) {
    case Coefficient::M: return {mat.M_minus, mat.M_plus};
    case Coefficient::Alpha: return {mat.alpha_minus, mat.alpha_plus};
    case Coefficient::Kappa: return {mat.kappa_minus, mat.kappa_plus};
  }
  return {0.0, 0.0};
}

}  // namespace

void MaterialTable::validate() const {
  require_positive(mobility, "mobility");
  require_positive(gamma, "gamma");
  require_finite(xi, "xi");
  require_positive(M_minus, "M_minus");
  require_positive(M_plus, "M_plus");
  require_finite(alpha_minus, "alpha_minus");
  require_finite(alpha_plus, "alpha_plus");
  require_positive(kappa_minus, "kappa_minus");
  require_positive(kappa_plus, "kappa_plus");
  require_spd(C_minus, "C_minus");
  require_spd(C_plus, "C_plus");
}

double psi(double phi) {
  const double a = 1.0 - phi * phi;
  return 0.25 * a * a;
}

double psi_prime(double phi) { return phi * phi * phi - phi; }

double psi_prime_split(double phi_new, double phi_old) { return phi_new * phi_new * phi_new - phi_old; }

double psi_prime_split_jacobian(double phi_new) { return 3.0 * phi_new * phi_new; }

double interp_pi(double phi) {
  if (phi < -1.0) return 0.0;
  if (phi > 1.0) return 1.0;
  return 0.25 * (-phi * phi * phi + 3.0 * phi + 2.0);
}

double interp_pi_prime(double phi) {
  if (phi < -1.0 || phi > 1.0) return 0.0;
  return 0.75 * (1.0 - phi * phi);
}

double interp_pi_second(double phi) {
  if (phi < -1.0 || phi > 1.0) return 0.0;
  return -1.5 * phi;
}

double mobility(const MaterialTable& mat, double /*phi*/) { return mat.mobility; }

double coeff(const MaterialTable& mat, double phi, Coefficient which) {
  const auto [lo, hi] = endpoints(mat, which);
  // Exact endpoint values, independent of rounding in the cubic.
  if (phi <= -1.0) return lo;
  if (phi >= 1.0) return hi;
  return blend(lo, hi, interp_pi(phi));
}

double coeff_prime(const MaterialTable& mat, double phi, Coefficient which) {
  const auto [lo, hi] = endpoints(mat, which);
  return interp_pi_prime(phi) * (hi - lo);
}

double coeff_second(const MaterialTable& mat, double phi, Coefficient which) {
  const auto [lo, hi] = endpoints(mat, which);
  return interp_pi_second(phi) * (hi - lo);
}

Voigt stiffness(const MaterialTable& mat, double phi) {
  if (phi <= -1.0) return mat.C_minus;
  if (phi >= 1.0) return mat.C_plus;
  return mat.C_minus + interp_pi(phi) * (mat.C_plus - mat.C_minus);
}

Voigt stiffness_prime(const MaterialTable& mat, double phi) {
  return interp_pi_prime(phi) * (mat.C_plus - mat.C_minus);
}

SymTensor eigenstrain(const MaterialTable& mat, double phi) {
  return {mat.xi * phi, mat.xi * phi, 0.0};
}

VoigtVector stress_voigt(const MaterialTable& mat, double phi, const VoigtVector& strain, double p) {
  const VoigtVector elastic = strain - mat.xi * phi * kIdentity;
  return stiffness(mat, phi) * elastic - coeff(mat, phi, Coefficient::Alpha) * p * kIdentity;
}

SymTensor stress(const MaterialTable& mat, double phi, const SymTensor& strain, double p) {
  return stress_from_voigt(stress_voigt(mat, phi, strain_to_voigt(strain), p));
}

double elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain) {
  const VoigtVector e = strain - mat.xi * phi * kIdentity;
  return 0.5 * e.dot(stiffness(mat, phi) * e);
}

double dphi_elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain) {
  const VoigtVector e = strain - mat.xi * phi * kIdentity;
  return 0.5 * e.dot(stiffness_prime(mat, phi) * e) - mat.xi * kIdentity.dot(stiffness(mat, phi) * e);
}

double d2phi_elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain) {
  const VoigtVector e = strain - mat.xi * phi * kIdentity;
  const Voigt c2 = interp_pi_second(phi) * (mat.C_plus - mat.C_minus);
  return 0.5 * e.dot(c2 * e) - 2.0 * mat.xi * kIdentity.dot(stiffness_prime(mat, phi) * e) +
         mat.xi * mat.xi * kIdentity.dot(stiffness(mat, phi) * kIdentity);
}

VoigtVector dphi_elastic_energy_density_dstrain(const MaterialTable& mat, double phi,
                                                const VoigtVector& strain) {
  const VoigtVector e = strain - mat.xi * phi * kIdentity;
  return stiffness_prime(mat, phi) * e - mat.xi * stiffness(mat, phi) * kIdentity;
}

double fluid_energy_density(const MaterialTable& mat, double phi, double p) {
  return 0.5 * p * p / coeff(mat, phi, Coefficient::M);
}

double fluid_energy_density_content(const MaterialTable& mat, double phi, double theta, double divu) {
  const double d = theta - coeff(mat, phi, Coefficient::Alpha) * divu;
  return 0.5 * coeff(mat, phi, Coefficient::M) * d * d;
}

double dphi_fluid_energy_density(const MaterialTable& mat, double phi, double divu, double p) {
  const double m = coeff(mat, phi, Coefficient::M);
  if (!(m > 0.0)) throw std::domain_error("dphi_fluid_energy_density: M(phi) <= 0");
  const double dm = coeff_prime(mat, phi, Coefficient::M);
  const double da = coeff_prime(mat, phi, Coefficient::Alpha);
  return dm / (2.0 * m * m) * p * p - p * da * divu;
}

double d2phi_fluid_energy_density(const MaterialTable& mat, double phi, double divu, double p) {
  const double m = coeff(mat, phi, Coefficient::M);
  if (!(m > 0.0)) throw std::domain_error("d2phi_fluid_energy_density: M(phi) <= 0");
  const double dm = coeff_prime(mat, phi, Coefficient::M);
  const double d2m = coeff_second(mat, phi, Coefficient::M);
  const double d2a = coeff_second(mat, phi, Coefficient::Alpha);
  return 0.5 * p * p * (d2m / (m * m) - 2.0 * dm * dm / (m * m * m)) - p * d2a * divu;
}

double pressure_from_content(const MaterialTable& mat, double phi, double theta, double divu) {
  return coeff(mat, phi, Coefficient::M) * (theta - coeff(mat, phi, Coefficient::Alpha) * divu);
}

double content_from_pressure(const MaterialTable& mat, double phi, double p, double divu) {
  return p / coeff(mat, phi, Coefficient::M) + coeff(mat, phi, Coefficient::Alpha) * divu;
}

}  // namespace chb
