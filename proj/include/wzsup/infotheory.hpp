#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wzsup/distribution.hpp"
#include "wzsup/group.hpp"

namespace wzsup {
namespace infotheory {

/// Binary entropy in bits, with the 0*log(0) = 0 convention.
inline double binary_entropy(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("binary_entropy: argument must be in [0,1]");
    if (t == 0.0 || t == 1.0) return 0.0;
    return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

/// Shannon entropy in bits of a distribution over the group alphabet.
inline double entropy(const SymbolDistribution& dist) {
    double h = 0.0;
    for (int g = 0; g < dist.order(); ++g) {
        const double p = dist[g];
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

/// Group convolution (a*b)(g) = sum_h a(h) b(g-h); the law of the sum of
/// independent symbols drawn from a and b. Commutative.
inline SymbolDistribution convolve(const SymbolDistribution& a, const SymbolDistribution& b) {
    if (!(a.alphabet() == b.alphabet())) throw std::invalid_argument("convolve: alphabet mismatch");
    const GroupAlphabet& g = a.alphabet();
    std::vector<double> out(g.order, 0.0);
    for (int x = 0; x < g.order; ++x) {
        const double ax = a[x];
        if (ax == 0.0) continue;
        for (int y = 0; y < g.order; ++y) out[g.add(static_cast<Sym>(x), static_cast<Sym>(y))] += ax * b[y];
    }
    return SymbolDistribution(g, std::move(out));
}

/// Binary crossover convolution p*q = p(1-q) + q(1-p).
inline double binary_convolve(double p, double q) { return p * (1.0 - q) + q * (1.0 - p); }

/// The distortion-D test-channel noise law: zero with probability 1-D, every
/// other symbol with probability D/(2^l - 1).
inline SymbolDistribution d_distribution(GroupAlphabet alphabet, double distortion) {
    const double dmax = static_cast<double>(alphabet.order - 1) / alphabet.order;
    if (!(distortion >= 0.0 && distortion <= dmax + 1e-15))
        throw std::invalid_argument("d_distribution: D must be in [0, (2^l-1)/2^l]");
    return SymbolDistribution::symmetric(alphabet, std::min(distortion, dmax));
}

/// The no-error rate region for superposed random codebooks at distortion D:
///   r0_min   = l - H(q*d)     (enough C0 codewords to cover per C1 word)
///   sum_min  = l - H(d)       (enough superposed codewords overall)
///   r0_max   = l - H(p*d)     (few enough C0 codewords to channel-decode)
/// with corner rate r1_corner = max(0, sum_min - r0_max). The region is
/// nonempty iff H(q*d) > H(p*d).
struct WzRateRegion {
    double r0_min = 0.0;
    double sum_min = 0.0;
    double r0_max = 0.0;
    double r1_corner = 0.0;
    bool nonempty = false;
};

inline WzRateRegion wz_rate_region(int l, const SymbolDistribution& p, const SymbolDistribution& q,
                                   double distortion) {
    const GroupAlphabet g = GroupAlphabet::bits(l);
    if (!(p.alphabet() == g) || !(q.alphabet() == g))
        throw std::invalid_argument("wz_rate_region: distribution alphabet does not match l");
    const SymbolDistribution d = d_distribution(g, distortion);
    const double h_qd = entropy(convolve(q, d));
    const double h_pd = entropy(convolve(p, d));
    WzRateRegion r;
    r.r0_min = l - h_qd;
    r.sum_min = l - entropy(d);  // H(X) = l: X is uniform because Y is
    r.r0_max = l - h_pd;
    r.r1_corner = std::max(0.0, r.sum_min - r.r0_max);
    r.nonempty = h_qd > h_pd;
    return r;
}

namespace detail {

/// d/dD [H(p*D) - H(D)] computed analytically; dH/dt = log2((1-t)/t).
inline double wz_curve_slope(double p, double D) {
    const double pd = binary_convolve(p, D);
    return (1.0 - 2.0 * p) * std::log2((1.0 - pd) / pd) - std::log2((1.0 - D) / D);
}

inline double wz_curve(double p, double D) {
    return binary_entropy(binary_convolve(p, D)) - binary_entropy(D);
}

/// Tangency residual: curve slope at D minus the slope of the chord from
/// (D, curve(D)) to (p, 0). Negative near 0, positive near p.
inline double time_sharing_residual(double p, double D) {
    return wz_curve_slope(p, D) - wz_curve(p, D) / (D - p);
}

}  // namespace detail

/// The distortion D' where the chord to the zero-rate point (p, 0) is tangent
/// to H(p*D) - H(D). Bisection on the tangency residual over
/// [1e-9, p - 1e-9]; deterministic, at most 200 halvings.
inline double time_sharing_threshold(double p) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("time_sharing_threshold: p must be in (0, 1/2)");
    double lo = 1e-9;
    double hi = p - 1e-9;
    double flo = detail::time_sharing_residual(p, lo);
    double fhi = detail::time_sharing_residual(p, hi);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw std::runtime_error("time_sharing_threshold: residual does not bracket a root");
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = detail::time_sharing_residual(p, mid);
        if (fmid < 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Rate-distortion function with side information for the doubly symmetric
/// binary source: H(p*D) - H(D) up to the time-sharing threshold D', then the
/// chord through (D', R(D')) and (p, 0).
inline double binary_wz_rd(double p, double distortion) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("binary_wz_rd: p must be in (0, 1/2)");
    if (!(distortion >= 0.0 && distortion <= p)) throw std::invalid_argument("binary_wz_rd: D must be in [0, p]");
    if (distortion == p) return 0.0;
    const double dp = time_sharing_threshold(p);
    if (distortion <= dp) return detail::wz_curve(p, distortion);
    return detail::wz_curve(p, dp) * (p - distortion) / (p - dp);
}

/// Inverse of binary_wz_rd in the distortion argument: the distortion at
/// which the rate-distortion function equals `rate`. Bisection; the function
/// is continuous and strictly decreasing in D on [0, p].
inline double binary_wz_distortion(double p, double rate) {
    if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("binary_wz_distortion: p must be in (0, 1/2)");
    const double r_max = binary_wz_rd(p, 0.0);  // == H(p)
    if (!(rate >= 0.0 && rate <= r_max))
        throw std::invalid_argument("binary_wz_distortion: rate must be in [0, H(p)]");
    double lo = 0.0, hi = p;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (binary_wz_rd(p, mid) > rate)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Cost-constrained binary interference-cancellation parameters: the C1 bias
/// q* solving p*q* = W, the source-coding bound 1 - H(W) on R0, the
/// cost-capacity H(p*q) - H(p), and the corner rate H(W) - H(p).
struct DpcBinaryParams {
    double p = 0.0;
    double w = 0.0;
    double q_star = 0.0;
    double r_half_w = 0.0;
    double cap_p_q = 0.0;
    double r1_star = 0.0;
};

inline DpcBinaryParams dpc_binary_params(double p, double w) {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("dpc_binary_params: p must be in [0, 1/2)");
    if (!(w >= p && w <= 0.5)) throw std::invalid_argument("dpc_binary_params: W must be in [p, 1/2]");
    DpcBinaryParams out;
    out.p = p;
    out.w = w;
    out.q_star = (w - p) / (1.0 - 2.0 * p);
    out.r_half_w = 1.0 - binary_entropy(w);
    out.cap_p_q = binary_entropy(binary_convolve(p, out.q_star)) - binary_entropy(p);
    out.r1_star = binary_entropy(w) - binary_entropy(p);
    return out;
}

/// Rate-distortion function with side information in the quadratic-Gaussian
/// case: (1/2) log2(P_Z / D).
inline double gaussian_wz_rate(double p_z, double distortion) {
    if (!(p_z > 0.0)) throw std::invalid_argument("gaussian_wz_rate: P_Z must be positive");
    if (!(distortion > 0.0 && distortion <= p_z))
        throw std::invalid_argument("gaussian_wz_rate: D must be in (0, P_Z]");
    return 0.5 * std::log2(p_z / distortion);
}

/// The reconstruction scaling beta = sqrt(1 - D/P_Z) that makes the end-to-end
/// error power exactly D.
inline double beta_scale(double p_z, double distortion) {
    if (!(p_z > 0.0)) throw std::invalid_argument("beta_scale: P_Z must be positive");
    if (!(distortion >= 0.0 && distortion <= p_z)) throw std::invalid_argument("beta_scale: D must be in [0, P_Z]");
    return std::sqrt(1.0 - distortion / p_z);
}

/// Parameters of the dithered Gaussian scheme. P0 defaults to P_Z + Q.
struct GaussianWzParams {
    double p_y = 1.0;
    double p_z = 1.0;
    double distortion = 0.25;
    double q_var = 1.0;   // variance of C1 symbols
    double p0 = 0.0;      // variance of C0 symbols
    double beta = 0.0;
};

inline GaussianWzParams make_gaussian_wz_params(double p_y, double p_z, double distortion, double q_var,
                                                double p0 = 0.0) {
    if (!(p_y >= 0.0)) throw std::invalid_argument("gaussian params: P_Y must be nonnegative");
    if (!(p_z > 0.0)) throw std::invalid_argument("gaussian params: P_Z must be positive");
    if (!(distortion > 0.0 && distortion <= p_z))
        throw std::invalid_argument("gaussian params: D must be in (0, P_Z]");
    if (!(q_var + distortion > p_z))
        throw std::invalid_argument("gaussian params: covering condition Q + D > P_Z violated");
    GaussianWzParams out;
    out.p_y = p_y;
    out.p_z = p_z;
    out.distortion = distortion;
    out.q_var = q_var;
    out.p0 = p0 > 0.0 ? p0 : p_z + q_var;
    out.beta = beta_scale(p_z, distortion);
    return out;
}

}  // namespace infotheory
}  // namespace wzsup
