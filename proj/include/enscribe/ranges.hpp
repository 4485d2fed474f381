#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "enscribe/common.hpp"

namespace enscribe {

/// Annotation attached to an interval endpoint.
enum class EndpointKind { Central, WeaklyCentral, QuasiCentral, Open, Unannotated };

inline const char* to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::Central: return "central";
    case EndpointKind::WeaklyCentral: return "weakly_central";
    case EndpointKind::QuasiCentral: return "quasi_central";
    case EndpointKind::Open: return "open";
    case EndpointKind::Unannotated: return "unannotated";
  }
  return "open";
}

struct QInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;
  EndpointKind lo_kind = EndpointKind::Open;
  EndpointKind hi_kind = EndpointKind::Open;

  /// `slack` widens closed endpoints only.
  bool contains(double q, double slack = 0.0) const {
    const bool above = lo_closed ? q >= lo - slack : q > lo;
    const bool below = hi_closed ? q <= hi + slack : q < hi;
    return above && below;
  }
};

struct QRangeResult {
  std::vector<QInterval> intervals;

  bool empty() const { return intervals.empty(); }
  bool contains(double q, double slack = 0.0) const {
    return std::any_of(intervals.begin(), intervals.end(),
                       [q, slack](const QInterval& iv) { return iv.contains(q, slack); });
  }
};

/// Feasible Q for a thick 2-text with |<psi_1|psi_2>| = z_modulus:
/// [2|z|/(1+|z|^2), 1] and (-1, -2|z|/(1+|z|)^2].
inline QRangeResult q_range_two_text(double z_modulus) {
  if (!(z_modulus >= 0.0 && z_modulus < 1.0)) {
    throw Error(ErrorKind::ZOutOfRange, "|z| = " + std::to_string(z_modulus) + " outside [0, 1)");
  }
  const double m = z_modulus;
  QRangeResult r;
  QInterval pos{2.0 * m / (1.0 + m * m), 1.0, true, true, EndpointKind::WeaklyCentral,
                EndpointKind::Unannotated};
  QInterval neg{-1.0, -2.0 * m / ((1.0 + m) * (1.0 + m)), false, true, EndpointKind::Open,
                EndpointKind::WeaklyCentral};
  r.intervals = {neg, pos};
  return r;
}

/// f(z) = 1 + 2(N-1)z - 3(N-2)z^2 + 4(N-1)z^3 + 3(N-2)z^4 - 2(2N-3)z^5 + (N-1)z^6.
inline double uniform_sextic(int n, double z) {
  const double a = n - 1.0, b = n - 2.0;
  const double coeff[7] = {1.0, 2.0 * a, -3.0 * b, 4.0 * a, 3.0 * b, -2.0 * (2.0 * n - 3.0), a};
  double acc = 0.0;
  for (int k = 6; k >= 0; --k) acc = acc * z + coeff[k];
  return acc;
}

/// Root of the sextic in (-1/(N-1), 0), by bisection to 1e-10 or better.
inline double z0_threshold(int n) {
  if (n < 3) throw Error(ErrorKind::SizeMismatch, "z0 is defined for N >= 3");
  double lo = -1.0 / (n - 1.0);
  double hi = 0.0;
  double flo = uniform_sextic(n, lo);
  const double fhi = uniform_sextic(n, hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw Error(ErrorKind::RootNotBracketed,
                "f(-1/(N-1)) = " + std::to_string(flo) + ", f(0) = " + std::to_string(fhi));
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double fm = uniform_sextic(n, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Q at the central tablet of a real uniform N-text.
inline double uniform_q2(int n, double z) {
  return -n * z / ((1.0 + z) * (1.0 + (n - 1.0) * z));
}

/// The other endpoint of the real uniform Q-range.
inline double uniform_q1(int n, double z) {
  const double z2 = z * z, z3 = z2 * z, z4 = z3 * z;
  const double num = z * (4.0 * z * (1.0 - z2) * (1.0 - z) +
                          n * (1.0 - 2.0 * z + 3.0 * z2 + 2.0 * z3 - 3.0 * z4));
  const double w = 1.0 - z + z2;
  return -num / ((1.0 + z) * (1.0 + (n - 1.0) * z) * w * w);
}

/// Feasible Q for a thick real uniform N-text: [Q1, Q2] intersected with
/// (-1, 1]; all of (-1, 1] when z = 0. Q2 is the central endpoint.
inline QRangeResult q_range_real_uniform(int n, double z) {
  if (n < 3) throw Error(ErrorKind::SizeMismatch, "real uniform ranges need N >= 3");
  if (!(z > -1.0 / (n - 1.0) && z < 1.0)) {
    throw Error(ErrorKind::ZOutOfRange, "z = " + std::to_string(z) + " outside (-1/(N-1), 1)");
  }
  QRangeResult r;
  if (z == 0.0) {
    r.intervals.push_back({-1.0, 1.0, false, true, EndpointKind::Open, EndpointKind::Unannotated});
    return r;
  }
  const double q1 = uniform_q1(n, z);
  const double q2 = uniform_q2(n, z);
  QInterval iv;
  if (q1 <= q2) {
    iv = {q1, q2, true, true, EndpointKind::QuasiCentral, EndpointKind::Central};
  } else {
    iv = {q2, q1, true, true, EndpointKind::Central, EndpointKind::QuasiCentral};
  }
  if (iv.hi > 1.0) {
    iv.hi = 1.0;
    iv.hi_closed = true;
    iv.hi_kind = EndpointKind::QuasiCentral;
  }
  if (iv.lo <= -1.0) {
    iv.lo = -1.0;
    iv.lo_closed = false;
    iv.lo_kind = EndpointKind::Open;
  }
  if (iv.lo < iv.hi || (iv.lo == iv.hi && iv.lo_closed && iv.hi_closed)) r.intervals.push_back(iv);
  return r;
}

}  // namespace enscribe
