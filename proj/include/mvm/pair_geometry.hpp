#pragma once

#include "mvm/jones.hpp"

namespace mvm {

// Length parameters of a symbol pair; the only statistics any error formula
// needs. gamma = |<s|s'>|, delta = sqrt(1-gamma^2), rho_-+^2 = (1 -+ delta)/2,
// so 2 rhoMinus rhoPlus = gamma.
struct PairGeometry {
  double gamma;
  double delta;
  double rhoMinus;
  double rhoPlus;
};

PairGeometry pairGeometryFromGamma(double gamma);
PairGeometry pairGeometry(const JonesVector& s, const JonesVector& t);

// Distances between unit vectors / their dyads:
//   coherent  sqrt(2) sqrt(1 - Re<s|t>)   (Euclidean in Jones space)
//   dd        sqrt(2) sqrt(1 - gamma)     (chordal Fubini-Study; phase-blind)
//   HS        sqrt(2) sqrt(1 - gamma^2)   (Hilbert-Schmidt between dyads)
//   Stokes    2 C_N sqrt(1 - gamma^2)     (Euclidean in Stokes space)
double distCoherent(const JonesVector& s, const JonesVector& t);
double distDD(const JonesVector& s, const JonesVector& t);
double distHS(const JonesVector& s, const JonesVector& t);
double distStokes(const JonesVector& s, const JonesVector& t);

double distStokesFromGamma(int n, double gamma);

}  // namespace mvm
