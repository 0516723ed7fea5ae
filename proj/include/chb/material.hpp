#pragma once

#include "chb/fem.hpp"

namespace chb {

/// Symmetric 2x2 tensor with tensorial (not engineering) off-diagonal.
struct SymTensor {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
};

inline VoigtVector strain_to_voigt(const SymTensor& e) { return {e.xx, e.yy, 2.0 * e.xy}; }
inline SymTensor strain_from_voigt(const VoigtVector& v) { return {v[0], v[1], 0.5 * v[2]}; }
inline SymTensor stress_from_voigt(const VoigtVector& v) { return {v[0], v[1], v[2]}; }

/// Material constants of the two solid phases. Phase-dependent coefficients
/// are blended between the phi = -1 ("minus") and phi = +1 ("plus") values.
struct MaterialTable {
  double mobility = 1.0;
  double gamma = 1e-4;
  double xi = 0.3;
  double M_minus = 1.0;
  double M_plus = 0.1;
  double alpha_minus = 1.0;
  double alpha_plus = 0.5;
  double kappa_minus = 0.1;
  double kappa_plus = 1.0;
  Voigt C_minus = (Voigt() << 4, 2, 0, 2, 4, 0, 0, 0, 8).finished();
  Voigt C_plus = (Voigt() << 1, 0.5, 0, 0.5, 1, 0, 0, 0, 2).finished();

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const MaterialTable&) const = default;
};

enum class Coefficient { M, Alpha, Kappa };

// Double-well potential and its convex splitting.
double psi(double phi);
double psi_prime(double phi);
/// phi_new^3 - phi_old: quartic part implicit, quadratic part explicit.
double psi_prime_split(double phi_new, double phi_old);
/// d/dphi_new of psi_prime_split.
double psi_prime_split_jacobian(double phi_new);

// Interpolation weight: clamped cubic, 0 below -1 and 1 above +1.
double interp_pi(double phi);
double interp_pi_prime(double phi);
double interp_pi_second(double phi);

double mobility(const MaterialTable& mat, double phi);

double coeff(const MaterialTable& mat, double phi, Coefficient which);
double coeff_prime(const MaterialTable& mat, double phi, Coefficient which);
double coeff_second(const MaterialTable& mat, double phi, Coefficient which);
Voigt stiffness(const MaterialTable& mat, double phi);
Voigt stiffness_prime(const MaterialTable& mat, double phi);

SymTensor eigenstrain(const MaterialTable& mat, double phi);

/// C(phi)(eps - T(phi)) - alpha(phi) p I.
SymTensor stress(const MaterialTable& mat, double phi, const SymTensor& strain, double p);
/// Same as stress() but in Voigt form, strain given as [exx, eyy, 2exy].
VoigtVector stress_voigt(const MaterialTable& mat, double phi, const VoigtVector& strain, double p);

/// 1/2 (eps - T):C(phi):(eps - T).
double elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain);
/// Partial derivative of the elastic density in phi at fixed strain.
double dphi_elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain);
double d2phi_elastic_energy_density(const MaterialTable& mat, double phi, const VoigtVector& strain);
/// Mixed derivative d/d(strain) of dphi_elastic_energy_density.
VoigtVector dphi_elastic_energy_density_dstrain(const MaterialTable& mat, double phi,
                                                const VoigtVector& strain);

/// p^2 / (2 M(phi)).
double fluid_energy_density(const MaterialTable& mat, double phi, double p);
/// M(phi)/2 (theta - alpha(phi) divu)^2.
double fluid_energy_density_content(const MaterialTable& mat, double phi, double theta, double divu);
/// Derivative of the fluid energy in phi at fixed content, in pressure variables:
/// M'/(2 M^2) p^2 - p alpha' divu.
double dphi_fluid_energy_density(const MaterialTable& mat, double phi, double divu, double p);
double d2phi_fluid_energy_density(const MaterialTable& mat, double phi, double divu, double p);

double pressure_from_content(const MaterialTable& mat, double phi, double theta, double divu);
double content_from_pressure(const MaterialTable& mat, double phi, double p, double divu);

}  // namespace chb
