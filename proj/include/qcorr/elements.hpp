#ifndef QCORR_ELEMENTS_HPP
#define QCORR_ELEMENTS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qcorr/fock.hpp"

// Constructors for the optical components of the setup: beam splitters,
// wave plates, polarizing beam splitters, loss channels, photon-pair
// sources, resource-state preparers and the scalar-indistinguishability
// splitter. Polarization is represented as two spatial modes throughout;
// there is no separate polarization datatype.

namespace qcorr {

/// Lossy-channel parameters. Transmission T = 1 - L.
struct ChannelSpec {
    double transmission = 1.0;

    static ChannelSpec from_loss(double loss) { return ChannelSpec{1.0 - loss}; }

    double loss() const { return 1.0 - transmission; }

    void validate() const {
        if (transmission < 0.0 || transmission > 1.0)
            throw std::invalid_argument("ChannelSpec: transmission outside [0,1]");
    }
};

/// Photon-pair source parameters. `pair_probability` is the per-pulse pair
/// generation probability (identified with |lambda|^2 of the two-mode
/// squeezed state to first order, valid in the p ~ 1e-3 regime the source
/// operates in). `indistinguishability` is the scalar mode overlap with
/// photons from the partner source.
struct SourceSpec {
    double pair_probability = 0.0;
    double indistinguishability = 1.0;

    void validate() const {
        if (pair_probability < 0.0 || pair_probability >= 0.1)
            throw std::invalid_argument("SourceSpec: pair probability outside the perturbative regime [0, 0.1)");
        if (indistinguishability < 0.0 || indistinguishability > 1.0)
            throw std::invalid_argument("SourceSpec: indistinguishability outside [0,1]");
    }
};

// ---------------------------------------------------------------------------
// single-photon mode maps (lifted to all photon numbers by apply_two_mode)

/// Real beam-splitter convention, symmetric with a minus sign on the second
/// diagonal:  a_i^dag -> sqrt(T) a_i^dag + sqrt(1-T) a_j^dag,
///            a_j^dag -> sqrt(1-T) a_i^dag - sqrt(T) a_j^dag.
/// Pinned by the regression suite; probabilities and concurrences are
/// convention-independent. At T = 1 the map is diag(1, -1), i.e. identity
/// up to the documented phase on the second mode.
inline Eigen::Matrix2cd beam_splitter(double transmission) {
    if (transmission < 0.0 || transmission > 1.0)
        throw std::invalid_argument("beam_splitter: transmission outside [0,1]");
    double t = std::sqrt(transmission), r = std::sqrt(1.0 - transmission);
    Eigen::Matrix2cd u;
    u << t, r, r, -t;
    return u;
}

/// Half-wave plate at angle theta on an (H, V) mode pair.
inline Eigen::Matrix2cd half_wave_plate(double theta) {
    double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
    Eigen::Matrix2cd u;
    u << c, s, s, -c;
    return u;
}

/// Quarter-wave plate at angle theta: R(theta) diag(1, i) R(-theta).
inline Eigen::Matrix2cd quarter_wave_plate(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2cd rot, retard;
    rot << c, -s, s, c;
    retard << cd(1.0, 0.0), 0.0, 0.0, cd(0.0, 1.0);
    return rot * retard * rot.adjoint();
}

inline PureState apply_beam_splitter(const PureState& psi, double transmission, const std::string& i,
                                     const std::string& j) {
    return apply_two_mode(psi, beam_splitter(transmission), i, j);
}

inline DensityOperator apply_beam_splitter(const DensityOperator& rho, double transmission, const std::string& i,
                                           const std::string& j) {
    return apply_two_mode(rho, beam_splitter(transmission), i, j);
}

/// PBS routing: H-input transmits to h_out, V-input reflects to v_out, with
/// reflection phase +1 (absorbed into an undetected global phase).
inline PureState apply_pbs(const PureState& psi, const std::string& h_in, const std::string& v_in,
                           const std::string& h_out, const std::string& v_out) {
    if (h_in == v_in || h_out == v_out) throw std::invalid_argument("apply_pbs: mode label clash");
    return swap_modes(psi, {{h_in, h_out}, {v_in, v_out}});
}

// ---------------------------------------------------------------------------
// loss channel

/// Photon loss with transmission T on one mode, as a CPTP map. Equivalent
/// to a beam splitter of transmission T into a fresh environment mode that
/// is traced out. Kraus form:
///   K_k = sum_n sqrt(C(n,k)) sqrt((1-T)^k T^(n-k)) |n-k><n|
class LossChannel {
  public:
    LossChannel(ChannelSpec spec, std::string mode) : spec_(spec), mode_(std::move(mode)) { spec_.validate(); }

    LossChannel(double transmission, std::string mode) : LossChannel(ChannelSpec{transmission}, std::move(mode)) {}

    const std::string& mode() const { return mode_; }
    double transmission() const { return spec_.transmission; }

    /// K_k as a sparse operator on `space` (k photons lost).
    SparseCd kraus(const SpacePtr& space, int k) const {
        const int p = space->reg().index_of(mode_);
        const double T = spec_.transmission;
        std::vector<Eigen::Triplet<cd>> trips;
        Occupation target;
        for (int col = 0; col < space->dim(); ++col) {
            const auto& occ = space->occupation(col);
            const int n = occ[p];
            if (n < k) continue;
            double amp = std::sqrt(detail::binomial(n, k) * std::pow(1.0 - T, k) * std::pow(T, n - k));
            if (amp == 0.0) continue;
            target = occ;
            target[p] = n - k;
            trips.emplace_back(space->index_of(target), col, cd(amp));
        }
        SparseCd op(space->dim(), space->dim());
        op.setFromTriplets(trips.begin(), trips.end());
        return op;
    }

    int kraus_count(const SpacePtr& space) const { return space->nmax() + 1; }

    DensityOperator apply(const DensityOperator& rho) const {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.space()->dim(), rho.space()->dim());
        for (int k = 0; k < kraus_count(rho.space()); ++k) {
            SparseCd K = kraus(rho.space(), k);
            if (K.nonZeros() == 0) continue;
            acc += K * rho.matrix() * K.adjoint();
        }
        return DensityOperator(rho.space(), std::move(acc));
    }

    /// Kraus branches of a pure state; zero branches are dropped. The sum
    /// of branch norms equals the input norm (trace preservation).
    std::vector<PureState> branches(const PureState& psi) const {
        std::vector<PureState> out;
        for (int k = 0; k < kraus_count(psi.space()); ++k) {
            SparseCd K = kraus(psi.space(), k);
            if (K.nonZeros() == 0) continue;
            Eigen::VectorXcd v = K * psi.amplitudes();
            if (v.squaredNorm() > 0.0) out.emplace_back(psi.space(), std::move(v));
        }
        return out;
    }

  private:
    ChannelSpec spec_;
    std::string mode_;
};

inline DensityOperator apply_loss(const DensityOperator& rho, double transmission, const std::string& mode) {
    return LossChannel(transmission, mode).apply(rho);
}

// ---------------------------------------------------------------------------
// sources and prepared states

/// Two-mode squeezed vacuum truncated at the space cap:
/// proportional to sum_n lambda^n |n, n>, lambda = sqrt(p), normalized.
inline PureState spdc_state(const SourceSpec& spec, const std::string& signal, const std::string& idler, int nmax) {
    spec.validate();
    if (nmax < 4) throw std::invalid_argument("spdc_state: truncation must admit at least two pairs");
    auto space = FockSpace::create({signal, idler}, nmax);
    const double lambda = std::sqrt(spec.pair_probability);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
    for (int n = 0; 2 * n <= nmax; ++n) v(space->index_of({n, n})) = std::pow(lambda, n);
    v /= v.norm();
    return PureState(std::move(space), std::move(v));
}

/// (|1,0> + |0,1>)/sqrt(2) on the label pair, built the way the setup does
/// it: photon in the first mode, half-wave plate at pi/8 across the pair,
/// PBS separation (a relabeling in the two-spatial-modes picture).
inline PureState prepare_path_entangled(const std::string& a, const std::string& b, int nmax = 2) {
    auto space = FockSpace::create({a, b}, nmax);
    PureState one = PureState::basis_state(space, {1, 0});
    return apply_two_mode(one, half_wave_plate(M_PI / 8.0), a, b);
}

struct HeraldedState {
    DensityOperator state;
    double probability = 0.0;
};

/// Path-entangled pair from a real source: SPDC emission, the signal split
/// across (a, b) by the pi/8 half-wave plate, heralded on a threshold click
/// of the idler (with the given efficiency), idler traced out. The result
/// is kept sub-normalized: trace_weight == herald probability.
inline HeraldedState prepare_path_entangled(const std::string& a, const std::string& b, const SourceSpec& source,
                                            double herald_efficiency, int nmax = 4) {
    if (herald_efficiency < 0.0 || herald_efficiency > 1.0)
        throw std::invalid_argument("prepare_path_entangled: efficiency outside [0,1]");
    PureState pair = spdc_state(source, a, "__idler", nmax);
    PureState with_b = tensor(pair, PureState::vacuum(FockSpace::create({b}, nmax)), nmax);
    PureState split = apply_two_mode(with_b, half_wave_plate(M_PI / 8.0), a, b);
    const int p_idler = split.space()->reg().index_of("__idler");
    Eigen::ArrayXd click = occupation_diagonal(
        split.space(), [&](const Occupation& occ) { return 1.0 - std::pow(1.0 - herald_efficiency, occ[p_idler]); });
    auto [projected, prob] = project(split, click);
    DensityOperator reduced = partial_trace(projected, {a, b});
    return HeraldedState{std::move(reduced), prob};
}

/// |psi_av> = sqrt(eta) |1_a 0_v> + sqrt(1-eta) |0_a 1_v>.
inline PureState resource_state(double eta, const std::string& a, const std::string& v, int nmax = 1) {
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("resource_state: eta outside [0,1]");
    auto space = FockSpace::create({a, v}, nmax);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space->dim());
    amps(space->index_of({1, 0})) = std::sqrt(eta);
    amps(space->index_of({0, 1})) = std::sqrt(1.0 - eta);
    return PureState(std::move(space), std::move(amps));
}

/// Wave-plate calibration of the resource bias used by the setup.
inline double eta_from_hwp(double theta) {
    double eta = std::sin(2.0 * theta);
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta_from_hwp: angle maps outside [0,1]");
    return eta;
}

/// Splits one mode into (matched, unmatched) internal sub-modes with
/// amplitudes sqrt(xi), sqrt(1-xi). Photons in the unmatched sub-mode never
/// interfere with the partner source's matched mode at a downstream beam
/// splitter. Mechanically this is a beam splitter of transmission xi into a
/// fresh sub-mode appended to the register.
inline PureState distinguishability_split(const PureState& psi, const std::string& mode, double xi,
                                          const std::string& unmatched_label) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("distinguishability_split: xi outside [0,1]");
    PureState widened =
        tensor(psi, PureState::vacuum(FockSpace::create({unmatched_label}, 0)), psi.space()->nmax());
    return apply_two_mode(widened, beam_splitter(xi), mode, unmatched_label);
}

inline DensityOperator distinguishability_split(const DensityOperator& rho, const std::string& mode, double xi,
                                                const std::string& unmatched_label) {
    if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("distinguishability_split: xi outside [0,1]");
    DensityOperator vac = DensityOperator::from_pure(PureState::vacuum(FockSpace::create({unmatched_label}, 0)));
    DensityOperator widened = tensor(rho, vac, rho.space()->nmax());
    return apply_two_mode(widened, beam_splitter(xi), mode, unmatched_label);
}

}  // namespace qcorr

#endif  // QCORR_ELEMENTS_HPP
