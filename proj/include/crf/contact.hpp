#pragma once

#include "crf/genmetric.hpp"

// Almost contact metric structures, the cosymplectic criterion, lifts to
// M x R with the conformal metric e^t (gamma + dt^2), and the generalized
// Sasakian conditions.

namespace crf {

struct AlmostContactMetric {
  EndField F;
  VectorField Z;
  OneFormField xi;
  MetricField gamma;
  CoordinateDomain dom;
  int m() const { return F.dim(); }
};

// gamma(FX,FY) = gamma(X,Y) - xi(X) xi(Y), xi = flat_gamma Z, |Z| = 1,
// gamma(Z, F .) = 0; throws StructureError naming the failed identity.
void validate_acm(const AlmostContactMetric& acm, double tol = 1e-9);

// fundamental 2-form Xi(X,Y) = gamma(FX, Y)
TwoFormField fundamental_form(const AlmostContactMetric& acm);

// classical lift J = F + dt (x) Z - xi (x) d/dt with Gamma = e^t(gamma+dt^2)
// and Kaehler form omega = e^t(Xi - xi ^ dt), all on dimension m+1.
struct ProductLift {
  EndField J;
  MetricField Gamma;
  TwoFormField omega;
  CoordinateDomain dom;
};
ProductLift product_lift(const AlmostContactMetric& acm);

// normality = integrability of the h=1 generalized lift with P=0, theta=0
CheckReport check_normality(const AlmostContactMetric& acm, const CheckConfig& cfg);

// d xi = 0, d Xi = 0 and normality
CheckReport check_cosymplectic(const AlmostContactMetric& acm, const CheckConfig& cfg);

struct SasakiInput {
  AlmostContactMetric plus, minus;  // sharing gamma
  TwoFormField psi;
  OneFormField kappa;
  CoordinateDomain dom;
};

// direct form of the generalized Sasakian conditions on M; both records must
// be normal (rejected otherwise with the normality residual)
CheckReport check_generalized_sasakian(const SasakiInput& s, const CheckConfig& cfg);

// the product-space quadruple (e^t(gamma+dt^2), e^t(psi + kappa ^ dt),
// J_+, J_-) whose Gualtieri verdict agrees with the direct form
MetricQuadruple sasakian_product_quadruple(const SasakiInput& s);

}  // namespace crf
