#pragma once

// Shared kernel algorithms, written once as templates over an element-ops
// policy and instantiated for the scalar and AVX2 backends.  Both
// instantiations execute the same IEEE operation sequence per lane, which is
// what makes the backends bit-identical.
//
// exp/log follow the classic Cephes rational forms, erfc follows Cody's
// rational Chebyshev approximation, and the normal quantile follows
// Wichura's PPND16.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace crsim::kern::impl {

// ---- coefficient tables ----------------------------------------------------

inline constexpr double kExpHi = 709.782712893383996843;   // above: overflow
inline constexpr double kExpLo = -745.133219101941108420;  // below: 0
inline constexpr double kLog2E = 1.4426950408889634073599;
inline constexpr double kLn2Hi = 6.93145751953125e-1;
inline constexpr double kLn2Lo = 1.42860682030941723212e-6;
inline constexpr double kExpP[3] = {1.26177193074810590878e-4, 3.02994407707441961300e-2,
                                    9.99999999999999999910e-1};
inline constexpr double kExpQ[4] = {3.00198505138664455042e-6, 2.52448340349684104192e-3,
                                    2.27265548208155028766e-1, 2.00000000000000000005e0};

inline constexpr double kLogP[6] = {1.01875663804580931796e-4, 4.97494994976747001425e-1,
                                    4.70579119878881725854e0,  1.44989225341610930846e1,
                                    1.79368678507819816313e1,  7.70838733755885391666e0};
inline constexpr double kLogQ[5] = {1.12873587189167450590e1, 4.52279145837532221105e1,
                                    8.29875266912776603211e1, 7.11544750618563894466e1,
                                    2.31251620126765340583e1};
inline constexpr double kSqrtHalf = 0.70710678118654752440;
inline constexpr double kLn2LoNeg = 2.121944400546905827679e-4;
inline constexpr double kLn2HiWide = 0.693359375;

inline constexpr double kErfA[5] = {3.16112374387056560e0, 1.13864154151050156e2,
                                    3.77485237685302021e2, 3.20937758913846947e3,
                                    1.85777706184603153e-1};
inline constexpr double kErfB[4] = {2.36012909523441209e1, 2.44024637934444173e2,
                                    1.28261652607737228e3, 2.84423683343917062e3};
inline constexpr double kErfC[9] = {5.64188496988670089e-1, 8.88314979438837594e0,
                                    6.61191906371416295e1,  2.98635138197400131e2,
                                    8.81952221241769090e2,  1.71204761263407058e3,
                                    2.05107837782607147e3,  1.23033935479799725e3,
                                    2.15311535474403846e-8};
inline constexpr double kErfD[8] = {1.57449261107098347e1, 1.17693950891312499e2,
                                    5.37181101862009858e2, 1.62138957456669019e3,
                                    3.29079923573345963e3, 4.36261909014324716e3,
                                    3.43936767414372164e3, 1.23033935480374942e3};
inline constexpr double kErfP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                                    1.25781726111229246e-1, 1.60837851487422766e-2,
                                    6.58749161529837803e-4, 1.63153871373020978e-2};
inline constexpr double kErfQ[5] = {2.56852019228982242e0,  1.87295284992346047e0,
                                    5.27905102951428412e-1, 6.05183413124413191e-2,
                                    2.33520497626869185e-3};
inline constexpr double kSqrtPiInv = 5.6418958354775628695e-1;
inline constexpr double kInvSqrt2 = 0.70710678118654752440;

inline constexpr double kQntA[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                                    1.9715909503065514427e3,  1.3731693765509461125e4,
                                    4.5921953931549871457e4,  6.7265770927008700853e4,
                                    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double kQntB[7] = {4.2313330701600911252e1, 6.8718700749205790830e2,
                                    5.3941960214247511077e3, 2.1213794301586595867e4,
                                    3.9307895800092710610e4, 2.8729085735721942674e4,
                                    5.2264952788528545610e3};
inline constexpr double kQntC[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                                    5.76949722146069140550e0,  3.64784832476320460504e0,
                                    1.27045825245236838258e0,  2.41780725177450611770e-1,
                                    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double kQntD[7] = {2.05319162663775882187e0,  1.67638483018380384940e0,
                                    6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                    1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                    1.05075007164441684324e-9};
inline constexpr double kQntE[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                                    1.78482653991729133580e0,  2.96560571828504891230e-1,
                                    2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double kQntF[7] = {5.99832206555887937690e-1,  1.36929880922735805310e-1,
                                    1.48753612908506148525e-2,  7.86869131145613259100e-4,
                                    1.84631831751005468180e-5,  1.42151175831644588870e-7,
                                    2.04426310338993978564e-15};

// ---- scalar ops policy -----------------------------------------------------

struct ScalarOps {
  using vec = double;
  using mask = bool;
  static vec bcast(double c) { return c; }
  static vec add(vec a, vec b) { return a + b; }
  static vec sub(vec a, vec b) { return a - b; }
  static vec mul(vec a, vec b) { return a * b; }
  static vec div(vec a, vec b) { return a / b; }
  static vec neg(vec a) { return -a; }
  static vec abs(vec a) { return std::fabs(a); }
  static vec floor(vec a) { return std::floor(a); }
  static vec trunc(vec a) { return std::trunc(a); }
  static vec sqrt(vec a) { return std::sqrt(a); }
  // mirrors the AVX2 min/max semantics (second operand wins on NaN)
  static vec min(vec a, vec b) { return a < b ? a : b; }
  static vec max(vec a, vec b) { return a > b ? a : b; }
  static mask le(vec a, vec b) { return a <= b; }
  static mask lt(vec a, vec b) { return a < b; }
  static vec select(mask m, vec a, vec b) { return m ? a : b; }
  // true when every lane is <= c; lets region work be skipped wholesale
  static bool all_le(vec a, double c) { return a <= c; }
  // 2^n for integral-valued n in the normal exponent range
  static vec pow2i(vec n) {
    const auto e = static_cast<std::int64_t>(n);
    return std::bit_cast<double>(static_cast<std::uint64_t>(e + 1023) << 52);
  }
  // IEEE-754 field extraction used by log: x = frac * 2^e, frac in [0.5, 1)
  static void frexp_parts(vec x, vec& frac, vec& e) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    e = static_cast<double>(static_cast<std::int64_t>((bits >> 52) & 0x7FF) - 1022);
    frac = std::bit_cast<double>((bits & 0x000FFFFFFFFFFFFFULL) | 0x3FE0000000000000ULL);
  }
};

// ---- algorithms ------------------------------------------------------------

template <class O>
struct Kern {
  using V = typename O::vec;

  static V exp(V x) {
    V n = O::floor(O::add(O::mul(x, O::bcast(kLog2E)), O::bcast(0.5)));
    // keep the exponent math in-range so the bit manipulation below stays defined
    n = O::max(O::min(n, O::bcast(2100.0)), O::bcast(-2100.0));
    V r = O::sub(x, O::mul(n, O::bcast(kLn2Hi)));
    r = O::sub(r, O::mul(n, O::bcast(kLn2Lo)));
    V rr = O::mul(r, r);
    V p = O::mul(O::add(O::mul(O::add(O::mul(O::bcast(kExpP[0]), rr), O::bcast(kExpP[1])), rr),
                        O::bcast(kExpP[2])),
                 r);
    V q = O::add(
        O::mul(O::add(O::mul(O::add(O::mul(O::bcast(kExpQ[0]), rr), O::bcast(kExpQ[1])), rr),
                      O::bcast(kExpQ[2])),
               rr),
        O::bcast(kExpQ[3]));
    V y = O::add(O::bcast(1.0), O::div(O::mul(O::bcast(2.0), p), O::sub(q, p)));
    // scale by 2^n in two steps so the full clamp range stays in normal exponents
    V n1 = O::trunc(O::mul(n, O::bcast(0.5)));
    V n2 = O::sub(n, n1);
    y = O::mul(O::mul(y, O::pow2i(n1)), O::pow2i(n2));
    y = O::select(O::lt(x, O::bcast(kExpLo)), O::bcast(0.0), y);
    y = O::select(O::lt(O::bcast(kExpHi), x),
                  O::bcast(std::numeric_limits<double>::infinity()), y);
    return y;
  }

  // natural log for x > 0 finite; subnormals are rescaled first
  static V log(V x) {
    typename O::mask tiny = O::lt(x, O::bcast(2.2250738585072014e-308));
    V xs = O::select(tiny, O::mul(x, O::bcast(0x1p54)), x);
    V bias = O::select(tiny, O::bcast(54.0), O::bcast(0.0));
    V frac, e;
    O::frexp_parts(xs, frac, e);
    e = O::sub(e, bias);
    typename O::mask lo = O::lt(frac, O::bcast(kSqrtHalf));
    V m = O::select(lo, O::sub(O::add(frac, frac), O::bcast(1.0)), O::sub(frac, O::bcast(1.0)));
    e = O::select(lo, O::sub(e, O::bcast(1.0)), e);
    V z = O::mul(m, m);
    V pn = O::bcast(kLogP[0]);
    for (int i = 1; i < 6; ++i) pn = O::add(O::mul(pn, m), O::bcast(kLogP[i]));
    V qn = O::add(m, O::bcast(kLogQ[0]));
    for (int i = 1; i < 5; ++i) qn = O::add(O::mul(qn, m), O::bcast(kLogQ[i]));
    V y = O::mul(m, O::div(O::mul(z, pn), qn));
    y = O::sub(y, O::mul(e, O::bcast(kLn2LoNeg)));
    y = O::sub(y, O::mul(O::bcast(0.5), z));
    V r = O::add(m, y);
    return O::add(r, O::mul(e, O::bcast(kLn2HiWide)));
  }

  static V erfc(V x) {
    V y = O::abs(x);
    // |x| <= 0.46875: via erf
    V z1 = O::mul(y, y);
    V xn = O::mul(O::bcast(kErfA[4]), z1);
    V xd = z1;
    for (int i = 0; i < 3; ++i) {
      xn = O::mul(O::add(xn, O::bcast(kErfA[i])), z1);
      xd = O::mul(O::add(xd, O::bcast(kErfB[i])), z1);
    }
    V erf1 = O::mul(x, O::div(O::add(xn, O::bcast(kErfA[3])), O::add(xd, O::bcast(kErfB[3]))));
    V r1 = O::sub(O::bcast(1.0), erf1);
    if (O::all_le(y, 0.46875)) return r1;
    // 0.46875 < |x| <= 4
    V cn = O::mul(O::bcast(kErfC[8]), y);
    V cd = y;
    for (int i = 0; i < 7; ++i) {
      cn = O::mul(O::add(cn, O::bcast(kErfC[i])), y);
      cd = O::mul(O::add(cd, O::bcast(kErfD[i])), y);
    }
    V rr = O::div(O::add(cn, O::bcast(kErfC[7])), O::add(cd, O::bcast(kErfD[7])));
    if (!O::all_le(y, 4.0)) {
      // |x| > 4
      V z3 = O::div(O::bcast(1.0), O::mul(y, y));
      V pn3 = O::mul(O::bcast(kErfP[5]), z3);
      V qd3 = z3;
      for (int i = 0; i < 4; ++i) {
        pn3 = O::mul(O::add(pn3, O::bcast(kErfP[i])), z3);
        qd3 = O::mul(O::add(qd3, O::bcast(kErfQ[i])), z3);
      }
      V r3 =
          O::mul(z3, O::div(O::add(pn3, O::bcast(kErfP[4])), O::add(qd3, O::bcast(kErfQ[4]))));
      r3 = O::div(O::sub(O::bcast(kSqrtPiInv), r3), y);
      rr = O::select(O::le(y, O::bcast(4.0)), rr, r3);
    }
    // split exp(-y^2) for tail accuracy
    V ysq = O::mul(O::floor(O::mul(y, O::bcast(16.0))), O::bcast(0.0625));
    V del = O::mul(O::sub(y, ysq), O::add(y, ysq));
    V ex = O::mul(exp(O::neg(O::mul(ysq, ysq))), exp(O::neg(del)));
    V rc = O::mul(ex, rr);
    rc = O::select(O::lt(x, O::bcast(0.0)), O::sub(O::bcast(2.0), rc), rc);
    return O::select(O::le(y, O::bcast(0.46875)), r1, rc);
  }

  static V phi(V x) { return O::mul(O::bcast(0.5), erfc(O::mul(x, O::bcast(-kInvSqrt2)))); }

  // inverse normal CDF, p in (0,1)
  static V inv_phi(V p) {
    V q = O::sub(p, O::bcast(0.5));
    // central
    V rc = O::sub(O::bcast(0.180625), O::mul(q, q));
    V xc = O::mul(q, O::div(poly8(kQntA, rc), poly8m(kQntB, rc)));
    // tails
    V qq = O::min(p, O::sub(O::bcast(1.0), p));
    V r = O::sqrt(O::neg(log(qq)));
    V r1 = O::sub(r, O::bcast(1.6));
    V v1 = O::div(poly8(kQntC, r1), poly8m(kQntD, r1));
    V r2 = O::sub(r, O::bcast(5.0));
    V v2 = O::div(poly8(kQntE, r2), poly8m(kQntF, r2));
    V v = O::select(O::le(r, O::bcast(5.0)), v1, v2);
    V xt = O::select(O::lt(q, O::bcast(0.0)), O::neg(v), v);
    return O::select(O::le(O::abs(q), O::bcast(0.425)), xc, xt);
  }

 private:
  static V poly8(const double (&c)[8], V x) {
    V r = O::bcast(c[7]);
    for (int i = 6; i >= 0; --i) r = O::add(O::mul(r, x), O::bcast(c[i]));
    return r;
  }
  // denominator polynomial with implicit trailing coefficient 1
  static V poly8m(const double (&c)[7], V x) {
    V r = O::bcast(c[6]);
    for (int i = 5; i >= 0; --i) r = O::add(O::mul(r, x), O::bcast(c[i]));
    return O::add(O::mul(r, x), O::bcast(1.0));
  }
};

}  // namespace crsim::kern::impl
