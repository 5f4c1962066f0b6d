#ifndef QCORR_ANALYTICS_HPP
#define QCORR_ANALYTICS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "qcorr/detection.hpp"
#include "qcorr/elements.hpp"
#include "qcorr/fock.hpp"

// Closed-form results and metrics: the loss map on a single-rail qubit, the
// heralded-amplifier output and its success probability, post-amplification
// fidelity and its Bloch average, the biased-entanglement output state,
// concurrence, and Hong-Ou-Mandel visibility.

namespace qcorr {

/// Two-mode {|00>,|01>,|10>,|11>} block of a density matrix: the four
/// populations and the |01><10| coherence d. Populations are reported as
/// measured in the block, without renormalizing by the block trace.
struct SubspaceMatrix {
    double p00 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
    double p11 = 0.0;
    cd d = 0.0;

    // diagnostics: coherence weight outside the block and population above
    // one photon per mode (both expected ~0 for the states of interest)
    double off_block_coherence = 0.0;
    double higher_population = 0.0;

    void validate() const {
        if (p00 < -1e-9 || p01 < -1e-9 || p10 < -1e-9 || p11 < -1e-9)
            throw std::invalid_argument("SubspaceMatrix: negative population");
        if (p00 + p01 + p10 + p11 > 1.0 + 1e-9)
            throw std::invalid_argument("SubspaceMatrix: populations exceed unit trace");
        if (std::abs(d) > std::sqrt(std::max(p01 * p10, 0.0)) + 1e-6)
            throw std::invalid_argument("SubspaceMatrix: coherence exceeds sqrt(p01*p10)");
    }
};

/// Single-rail qubit amplitudes alpha|0> + beta|1>.
struct QubitSpec {
    cd alpha = 1.0;
    cd beta = 0.0;

    QubitSpec() = default;
    QubitSpec(cd a, cd b) : alpha(a), beta(b) {
        double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > 1e-12) throw std::invalid_argument("QubitSpec: not normalized");
    }
};

/// C = 2 max(|d| - sqrt(p00 p11), 0), clamped to [0, 1].
inline double concurrence(const SubspaceMatrix& m) {
    m.validate();
    double c = 2.0 * (std::abs(m.d) - std::sqrt(std::max(m.p00 * m.p11, 0.0)));
    return std::min(std::max(c, 0.0), 1.0);
}

/// Reads the {0,1}x{0,1} block of a two-mode density operator.
inline SubspaceMatrix extract_subspace(const DensityOperator& rho) {
    if (rho.space()->reg().size() != 2)
        throw std::invalid_argument("extract_subspace: operator must live on exactly two modes");
    SubspaceMatrix m;
    m.p00 = std::real(rho.element({0, 0}, {0, 0}));
    m.p01 = std::real(rho.element({0, 1}, {0, 1}));
    m.p10 = std::real(rho.element({1, 0}, {1, 0}));
    m.p11 = std::real(rho.element({1, 1}, {1, 1}));
    m.d = rho.element({0, 1}, {1, 0});

    const auto& space = rho.space();
    auto in_block = [&](int i) {
        const auto& occ = space->occupation(i);
        return occ[0] <= 1 && occ[1] <= 1;
    };
    for (int i = 0; i < space->dim(); ++i) {
        if (!in_block(i)) m.higher_population += std::real(rho.matrix()(i, i));
        for (int j = 0; j < space->dim(); ++j) {
            if (i == j) continue;
            // the one tracked coherence sits between |01> and |10>
            bool tracked = in_block(i) && in_block(j) && space->total(i) == 1 && space->total(j) == 1;
            if (!tracked) m.off_block_coherence += std::abs(rho.matrix()(i, j));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// loss map and heralded-amplifier output, in closed form

/// Single-mode density matrix on {|0>,|1>}: populations and the coherence.
struct SingleRailMatrix {
    double p0 = 0.0;
    double p1 = 0.0;
    cd coherence = 0.0;  // <0| rho |1>
};

/// State after transmission T of alpha|0> + beta|1> through loss:
///   |beta|^2 (1-T) |0><0| + (alpha|0> + sqrt(T) beta|1>)(h.c.)
inline SingleRailMatrix loss_output(const QubitSpec& q, double T) {
    if (T < 0.0 || T > 1.0) throw std::invalid_argument("loss_output: transmission outside [0,1]");
    double b2 = std::norm(q.beta);
    SingleRailMatrix m;
    m.p0 = b2 * (1.0 - T) + std::norm(q.alpha);
    m.p1 = T * b2;
    m.coherence = q.alpha * std::conj(std::sqrt(T) * q.beta);
    return m;
}

/// Output of a successful heralded amplification with amplitude gain g on
/// the loss-degraded state, including the normalization 1 + T|beta|^2(g^2-1):
///   [ |beta|^2 (1-T) |0><0| + (alpha|0> + g sqrt(T) beta|1>)(h.c.) ] / norm
/// Returned alongside the success probability eta * norm of the ideal
/// photon-number-resolved scissors at the matching bias eta = 1/(1+g^2)
/// with unit resource delivery.
inline std::pair<SingleRailMatrix, double> ha_output(const QubitSpec& q, double T, double g) {
    if (T < 0.0 || T > 1.0) throw std::invalid_argument("ha_output: transmission outside [0,1]");
    if (g < 1.0) throw std::invalid_argument("ha_output: gain must be >= 1");
    double b2 = std::norm(q.beta);
    double norm = 1.0 + T * b2 * (g * g - 1.0);
    SingleRailMatrix m;
    m.p0 = (b2 * (1.0 - T) + std::norm(q.alpha)) / norm;
    m.p1 = g * g * T * b2 / norm;
    m.coherence = q.alpha * std::conj(g * std::sqrt(T) * q.beta) / norm;
    double eta = 1.0 / (1.0 + g * g);
    return {m, eta * norm};
}

/// Fidelity between the input qubit and the amplified output, as a function
/// of |beta|^2:
///   F = [ |b|^2 (1-T)(1-|b|^2) + (1-|b|^2 + g sqrt(T) |b|^2)^2 ] / norm
inline double fidelity_after_ha(double beta_sq, double T, double g) {
    if (beta_sq < 0.0 || beta_sq > 1.0) throw std::invalid_argument("fidelity_after_ha: |beta|^2 outside [0,1]");
    double norm = 1.0 + T * beta_sq * (g * g - 1.0);
    double overlap = 1.0 - beta_sq + g * std::sqrt(T) * beta_sq;
    return (beta_sq * (1.0 - T) * (1.0 - beta_sq) + overlap * overlap) / norm;
}

namespace detail {

/// Adaptive Simpson quadrature; the integrands here are smooth rationals,
/// so the (15-point) error estimate is reliable.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                               double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) < 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// Average fidelity over the state family, integrating F uniformly over
/// |beta|^2 in [0, 1]. Quadrature error below 1e-9.
inline double average_fidelity(double T, double g) {
    return detail::integrate([&](double b2) { return fidelity_after_ha(b2, T, g); }, 0.0, 1.0, 1e-12);
}

/// Gain maximizing the average fidelity at transmission T, by golden-section
/// search on [1, g_hi]; F_av is unimodal in g over this range.
inline double optimal_average_fidelity_gain(double T, double g_hi = 50.0) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 1.0, b = g_hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = average_fidelity(T, x1), f2 = average_fidelity(T, x2);
    for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = average_fidelity(T, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = average_fidelity(T, x1);
        }
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// biased-entanglement channel, in closed form

/// State after sending one arm of sqrt(eps)|01> + sqrt(1-eps)|10> through
/// loss T and amplifying with the matched gain g sqrt(eps T) = sqrt(1-eps):
///   [ eps (1-T) |00><00| + (1-eps)(|01>+|10>)(<01|+<10|) ] / D,
///   D = 2(1-eps) + (1-T) eps.
inline SubspaceMatrix biased_output(double eps, double T) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("biased_output: eps outside (0,1)");
    if (T < 0.0 || T > 1.0) throw std::invalid_argument("biased_output: transmission outside [0,1]");
    double denom = 2.0 * (1.0 - eps) + (1.0 - T) * eps;
    SubspaceMatrix m;
    m.p00 = eps * (1.0 - T) / denom;
    m.p01 = (1.0 - eps) / denom;
    m.p10 = (1.0 - eps) / denom;
    m.p11 = 0.0;
    m.d = (1.0 - eps) / denom;
    return m;
}

// ---------------------------------------------------------------------------
// Hong-Ou-Mandel visibility

/// V = 1 - coincidence_min / coincidence_baseline.
inline double hom_visibility(double coincidence_min, double coincidence_baseline) {
    if (coincidence_baseline <= 0.0) throw std::invalid_argument("hom_visibility: baseline must be positive");
    return 1.0 - coincidence_min / coincidence_baseline;
}

struct HomRates {
    double coincidence_dip = 0.0;       // with overlap xi
    double coincidence_baseline = 0.0;  // fully distinguishable photons
};

/// Two single photons on a 50:50 beam splitter with scalar overlap xi,
/// coincidence = clicks on both output ports. Exercises the sub-mode model:
/// expected dip (1-xi)/2 against baseline 1/2.
inline HomRates simulate_hom(double xi, double detector_efficiency = 1.0) {
    auto run = [&](double overlap) {
        auto space = FockSpace::create({"i", "j"}, 2);
        PureState in = PureState::basis_state(space, {1, 1});
        PureState split = distinguishability_split(in, "j", overlap, "j_u");
        PureState mixed = apply_beam_splitter(split, 0.5, "i", "j");
        // the unmatched sub-mode passes the same physical splitter against vacuum
        PureState widened = tensor(mixed, PureState::vacuum(FockSpace::create({"i_u"}, 0)), mixed.space()->nmax());
        PureState out = apply_beam_splitter(widened, 0.5, "i_u", "j_u");
        DensityOperator rho = DensityOperator::from_pure(out);
        DetectorModel det{DetectorKind::kThreshold, detector_efficiency};
        HeraldPattern pattern;
        pattern.fixed.push_back({DetectorPort{"i", "i_u"}, det, PortOutcome::kClick, 0});
        pattern.fixed.push_back({DetectorPort{"j", "j_u"}, det, PortOutcome::kClick, 0});
        return herald(rho, pattern).second;
    };
    return HomRates{run(xi), run(0.0)};
}

}  // namespace qcorr

#endif  // QCORR_ANALYTICS_HPP
