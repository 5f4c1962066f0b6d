#ifndef QCORR_PROTOCOLS_HPP
#define QCORR_PROTOCOLS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/analytics.hpp"
#include "qcorr/detection.hpp"
#include "qcorr/elements.hpp"
#include "qcorr/fock.hpp"

// Composite procedures: the quantum-scissors heralded amplifier, the
// entanglement-swapping stage, the full corrected-channel pipeline and the
// direct-transmission baseline.
//
// Mode roles follow the setup: one source emits a pair whose photons are
// split into (f, e) and (h, g); mode e traverses the lossy channel and is
// amplified against resource mode a, teleporting onto output mode v; the
// swap interferes g with f, leaving entanglement between h and v.
//
// Heralds: "one and only one detection event" over a detector pair is an
// exclusive-or with the partner port required dark. The two click outcomes
// differ by a known local phase flip on the output mode; the correction is
// applied deterministically inside each op before outcomes are summed.
// Channel preparation is heralded by the amplifier click plus the ancilla
// herald; state transmission adds the swap click. No strict time ordering
// between the two stages is modeled; the heralds are conjoined.

namespace qcorr {

/// Quantum-scissors amplifier settings. The nominal amplitude gain is
/// g = sqrt((1-eta)/eta); eta = 1/2 gives g = 1 (pure teleportation).
struct AmplifierSpec {
    double eta = 0.5;
    double delivery_efficiency = 1.0;
    DetectorModel detector{DetectorKind::kThreshold, 1.0};

    double gain() const { return std::sqrt((1.0 - eta) / eta); }
    double intensity_gain() const { return (1.0 - eta) / eta; }

    void validate() const {
        if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("AmplifierSpec: eta outside (0,1)");
        if (delivery_efficiency < 0.0 || delivery_efficiency > 1.0)
            throw std::invalid_argument("AmplifierSpec: delivery efficiency outside [0,1]");
        detector.validate();
    }
};

/// End-to-end delivery transmission per mode path (optics plus detection
/// where the path ends on a detector). Unit values model a lossless setup.
struct DeliveryEfficiencies {
    double f = 1.0, e = 1.0, h = 1.0, g = 1.0, a = 1.0, v = 1.0;

    void validate() const {
        for (double x : {f, e, h, g, a, v})
            if (x < 0.0 || x > 1.0) throw std::invalid_argument("DeliveryEfficiencies: value outside [0,1]");
    }
};

enum class PipelineEngine {
    kBranch,  // pure-state branch stream; fast, default
    kDense,   // straight density-matrix composition; reference path
};

struct ExperimentConfig {
    double loss = 0.0;                  // added channel loss L on mode e
    double pair_probability = 0.00123;  // per pulse, both sources
    double xi_ha = 1.0;                 // mode overlap at the amplifier (independent sources)
    double xi_es = 1.0;                 // mode overlap at the swap (same source)
    AmplifierSpec amplifier;
    DetectorModel es_detector{DetectorKind::kThreshold, 1.0};
    DetectorModel ancilla_detector{DetectorKind::kThreshold, 1.0};
    DeliveryEfficiencies delivery;
    int n_max = 4;  // per-source emission cap in photons (>= 4 admits double pairs)
    double repetition_rate_hz = 81.0e6;
    PipelineEngine engine = PipelineEngine::kBranch;

    double channel_transmission() const { return 1.0 - loss; }

    /// Joint live-space cap: each source is truncated at n_max photons and
    /// the ancilla source contributes at most n_max/2 payload photons after
    /// its herald is consumed.
    int joint_cap() const { return n_max + n_max / 2; }

    void validate() const {
        if (loss < 0.0 || loss > 1.0) throw std::invalid_argument("ExperimentConfig: loss outside [0,1]");
        if (pair_probability < 0.0 || pair_probability >= 0.1)
            throw std::invalid_argument("ExperimentConfig: pair probability outside [0, 0.1)");
        if (xi_ha < 0.0 || xi_ha > 1.0 || xi_es < 0.0 || xi_es > 1.0)
            throw std::invalid_argument("ExperimentConfig: indistinguishability outside [0,1]");
        amplifier.validate();
        es_detector.validate();
        ancilla_detector.validate();
        delivery.validate();
        if (pair_probability > 0.0 && n_max < 4)
            throw std::invalid_argument("ExperimentConfig: truncation too small for double-pair noise (need n_max >= 4)");
        if (n_max < 2) throw std::invalid_argument("ExperimentConfig: n_max must be >= 2");
        if (repetition_rate_hz <= 0.0) throw std::invalid_argument("ExperimentConfig: repetition rate must be positive");
    }
};

struct PipelineResult {
    DensityOperator rho_hv;        // normalized two-mode state on (h, v)
    double p_channel_ready = 0.0;  // per pulse: amplifier herald AND ancilla herald
    double p_state_sent = 0.0;     // per pulse: amplifier AND swap AND ancilla heralds
    double dropped_weight = 0.0;   // probability weight cut by the joint truncation
};

// ---------------------------------------------------------------------------
// standalone heralded amplifier (dense, small registers)

/// Generalized quantum scissors on `in_mode`: interferes the input with arm
/// a of the resource state at a 50:50 splitter, heralds one and only one
/// click across the two output ports, applies the feed-forward phase
/// correction for the second outcome, and traces the ports. The amplified
/// state appears on a fresh mode `out_label` appended to the register.
/// Returns the conditional state (sub-normalized) and the herald
/// probability for a unit-trace input.
inline std::pair<DensityOperator, double> heralded_amplifier(const DensityOperator& rho, const std::string& in_mode,
                                                             const AmplifierSpec& spec,
                                                             const std::string& out_label = "v") {
    spec.validate();
    const std::string arm = "__ha_arm";
    PureState res = resource_state(spec.eta, arm, out_label, 1);
    DensityOperator res_rho = DensityOperator::from_pure(res);
    if (spec.delivery_efficiency < 1.0) {
        res_rho = apply_loss(res_rho, spec.delivery_efficiency, arm);
        res_rho = apply_loss(res_rho, spec.delivery_efficiency, out_label);
    }
    DensityOperator joint = tensor(rho, res_rho, rho.space()->nmax() + 1);
    joint = apply_beam_splitter(joint, 0.5, in_mode, arm);

    auto keep = joint.space()->reg().complement({in_mode, arm});
    DensityOperator acc = DensityOperator::zero(FockSpace::create(joint.space()->reg().subset(keep), joint.space()->nmax()));
    double prob = 0.0;
    Eigen::ArrayXd click_in = herald_click_element(joint.space(), spec.detector, {in_mode});
    Eigen::ArrayXd dark_in = herald_dark_element(joint.space(), spec.detector, {in_mode});
    Eigen::ArrayXd click_arm = herald_click_element(joint.space(), spec.detector, {arm});
    Eigen::ArrayXd dark_arm = herald_dark_element(joint.space(), spec.detector, {arm});

    {  // click on the input-side port
        auto [cond, p] = project(joint, Eigen::ArrayXd(click_in * dark_arm));
        prob += p;
        acc.accumulate(partial_trace(cond, keep));
    }
    {  // click on the resource-side port: phase flip on the output
        auto [cond, p] = project(joint, Eigen::ArrayXd(dark_in * click_arm));
        prob += p;
        DensityOperator reduced = partial_trace(cond, keep);
        acc.accumulate(apply_diagonal(reduced, phase_flip_diagonal(reduced.space(), out_label)));
    }
    return {std::move(acc), prob};
}

/// Entanglement swap: 50:50 interference of `g_mode` and `f_mode`, herald
/// one and only one click across the pair, phase correction applied on
/// `correction_mode` for the second outcome, measured modes traced.
inline std::pair<DensityOperator, double> entanglement_swap(const DensityOperator& rho, const std::string& g_mode,
                                                            const std::string& f_mode, const DetectorModel& det,
                                                            const std::string& correction_mode) {
    det.validate();
    DensityOperator mixed = apply_beam_splitter(rho, 0.5, g_mode, f_mode);
    auto keep = mixed.space()->reg().complement({g_mode, f_mode});
    DensityOperator acc = DensityOperator::zero(FockSpace::create(mixed.space()->reg().subset(keep), mixed.space()->nmax()));
    double prob = 0.0;
    Eigen::ArrayXd click_g = herald_click_element(mixed.space(), det, {g_mode});
    Eigen::ArrayXd dark_g = herald_dark_element(mixed.space(), det, {g_mode});
    Eigen::ArrayXd click_f = herald_click_element(mixed.space(), det, {f_mode});
    Eigen::ArrayXd dark_f = herald_dark_element(mixed.space(), det, {f_mode});
    {
        auto [cond, p] = project(mixed, Eigen::ArrayXd(click_g * dark_f));
        prob += p;
        acc.accumulate(partial_trace(cond, keep));
    }
    {
        auto [cond, p] = project(mixed, Eigen::ArrayXd(dark_g * click_f));
        prob += p;
        DensityOperator reduced = partial_trace(cond, keep);
        acc.accumulate(apply_diagonal(reduced, phase_flip_diagonal(reduced.space(), correction_mode)));
    }
    return {std::move(acc), prob};
}

// ---------------------------------------------------------------------------
// pipeline internals

namespace detail {

/// Pure-state branch stream: loss Kraus operators and the diagonal herald
/// elements both map pure states to pure states, so the whole pipeline runs
/// on sub-normalized vectors until density matrices are assembled at stage
/// boundaries.
struct BranchSet {
    std::vector<PureState> branches;

    double total_weight() const {
        double w = 0.0;
        for (const auto& b : branches) w += b.norm_squared();
        return w;
    }
};

constexpr double kBranchPrune = 1e-22;

inline void branch_loss(BranchSet& set, double transmission, const std::string& mode) {
    if (transmission >= 1.0) return;
    std::vector<PureState> out;
    for (const auto& b : set.branches) {
        LossChannel chan(transmission, mode);
        for (auto& k : chan.branches(b))
            if (k.norm_squared() > kBranchPrune) out.push_back(std::move(k));
    }
    set.branches = std::move(out);
}

inline void branch_apply(BranchSet& set, const SparseCd& op) {
    for (auto& b : set.branches) b = apply_operator(b, op);
}

/// Source emitting the (f, e) and (h, g) entangled pairs: one SPDC pair,
/// signal split across (f, e), idler split across (h, g), both by pi/8
/// half-wave plates. Delivery losses for f, h, g are applied here; the e
/// path loss is folded into the channel loss by the caller (loss channels
/// compose multiplicatively).
inline BranchSet main_source(const ExperimentConfig& cfg) {
    PureState pair = spdc_state(SourceSpec{cfg.pair_probability, cfg.xi_ha}, "f", "h", cfg.n_max);
    PureState widened = tensor(pair, PureState::vacuum(FockSpace::create({"e", "g"}, 0)), cfg.n_max);
    widened = apply_two_mode(widened, half_wave_plate(M_PI / 8.0), "f", "e");
    widened = apply_two_mode(widened, half_wave_plate(M_PI / 8.0), "h", "g");
    BranchSet set;
    set.branches.push_back(std::move(widened));
    branch_loss(set, cfg.delivery.f, "f");
    branch_loss(set, cfg.delivery.h, "h");
    branch_loss(set, cfg.delivery.g, "g");
    return set;
}

/// Ancilla source: SPDC pair, signal split into the resource (a, v) with
/// bias eta, idler heralded on a click and traced. Output branches live on
/// (a, v) with total weight = ancilla herald probability.
inline BranchSet ancilla_source(const ExperimentConfig& cfg) {
    PureState pair = spdc_state(SourceSpec{cfg.pair_probability, cfg.xi_ha}, "a", "__i2", cfg.n_max);
    PureState widened = tensor(pair, PureState::vacuum(FockSpace::create({"v"}, 0)), cfg.n_max);
    widened = apply_two_mode(widened, beam_splitter(cfg.amplifier.eta), "a", "v");
    BranchSet set;
    set.branches.push_back(std::move(widened));
    branch_loss(set, cfg.delivery.a, "a");
    branch_loss(set, cfg.delivery.v, "v");

    Eigen::ArrayXd click = herald_click_element(set.branches.front().space(), cfg.ancilla_detector, {"__i2"});
    BranchSet heralded;
    for (const auto& b : set.branches) {
        PureState clicked = apply_diagonal(b, click.cast<cd>());
        for (auto& [occ, comp] : split_by_occupation(clicked, {"__i2"}))
            if (comp.norm_squared() > kBranchPrune) heralded.branches.push_back(std::move(comp));
    }
    return heralded;
}

/// One heralding stage of the scissors type: 50:50 interference of
/// `in_a` and `in_b` (sub-mode split applied to `in_b` when xi < 1),
/// one-and-only-one click across the two port groups, phase flip on
/// `correction_mode` for the second outcome, ports traced out.
/// Accumulates the conditional states into `out` and returns the herald
/// probability.
inline double scissors_stage(const BranchSet& in, const std::string& in_a, const std::string& in_b, double xi,
                             const DetectorModel& det, const std::string& correction_mode, DensityOperator& out) {
    if (in.branches.empty()) return 0.0;
    SpacePtr space = in.branches.front().space();
    const int cap = space->nmax();

    // widen with sub-modes when the interfering photons are partially
    // distinguishable; the unmatched component meets vacuum on a parallel
    // copy of the splitter
    const bool split = xi < 1.0;
    const std::string unmatched = in_b + "_u";
    const std::string unmatched_partner = in_a + "_u";
    std::vector<std::string> ports = split ? std::vector<std::string>{in_a, in_b, unmatched_partner, unmatched}
                                           : std::vector<std::string>{in_a, in_b};
    DetectorPort port_a = split ? DetectorPort{in_a, unmatched_partner} : DetectorPort{in_a};
    DetectorPort port_b = split ? DetectorPort{in_b, unmatched} : DetectorPort{in_b};

    BranchSet work;
    if (split) {
        auto vac2 = PureState::vacuum(FockSpace::create({unmatched, unmatched_partner}, 0));
        for (const auto& b : in.branches) work.branches.push_back(tensor(b, vac2, cap));
        space = work.branches.front().space();
        SparseCd split_op = lift_two_mode(space, beam_splitter(xi), in_b, unmatched);
        SparseCd bs_m = lift_two_mode(space, beam_splitter(0.5), in_a, in_b);
        SparseCd bs_u = lift_two_mode(space, beam_splitter(0.5), unmatched_partner, unmatched);
        branch_apply(work, split_op);
        branch_apply(work, bs_m);
        branch_apply(work, bs_u);
    } else {
        work = in;
        SparseCd bs = lift_two_mode(space, beam_splitter(0.5), in_a, in_b);
        branch_apply(work, bs);
    }

    Eigen::ArrayXd click_a = herald_click_element(space, det, port_a);
    Eigen::ArrayXd dark_a = herald_dark_element(space, det, port_a);
    Eigen::ArrayXd click_b = herald_click_element(space, det, port_b);
    Eigen::ArrayXd dark_b = herald_dark_element(space, det, port_b);
    const Eigen::ArrayXcd outcome_a = (click_a * dark_b).cast<cd>();
    const Eigen::ArrayXcd outcome_b = (dark_a * click_b).cast<cd>();

    Eigen::ArrayXcd flip;  // built lazily on the reduced space
    double prob = 0.0;
    for (const auto& b : work.branches) {
        for (int oc = 0; oc < 2; ++oc) {
            PureState cond = apply_diagonal(b, oc == 0 ? outcome_a : outcome_b);
            double w = cond.norm_squared();
            if (w <= kBranchPrune) continue;
            prob += w;
            for (auto& [occ, comp] : split_by_occupation(cond, ports)) {
                if (comp.norm_squared() <= kBranchPrune) continue;
                if (oc == 1) {
                    if (flip.size() == 0) flip = phase_flip_diagonal(comp.space(), correction_mode);
                    comp = apply_diagonal(comp, flip);
                }
                out.accumulate(comp);
            }
        }
    }
    return prob;
}

/// Dense mirror of scissors_stage, used by the reference engine.
inline std::pair<DensityOperator, double> scissors_stage_dense(const DensityOperator& in, const std::string& in_a,
                                                               const std::string& in_b, double xi,
                                                               const DetectorModel& det,
                                                               const std::string& correction_mode) {
    DensityOperator work = in;
    const bool split = xi < 1.0;
    const std::string unmatched = in_b + "_u";
    const std::string unmatched_partner = in_a + "_u";
    std::vector<std::string> ports{in_a, in_b};
    DetectorPort port_a{in_a}, port_b{in_b};
    if (split) {
        work = distinguishability_split(work, in_b, xi, unmatched);
        auto vac = DensityOperator::from_pure(PureState::vacuum(FockSpace::create({unmatched_partner}, 0)));
        work = tensor(work, vac, work.space()->nmax());
        work = apply_beam_splitter(work, 0.5, in_a, in_b);
        work = apply_beam_splitter(work, 0.5, unmatched_partner, unmatched);
        ports = {in_a, in_b, unmatched_partner, unmatched};
        port_a = {in_a, unmatched_partner};
        port_b = {in_b, unmatched};
    } else {
        work = apply_beam_splitter(work, 0.5, in_a, in_b);
    }
    auto keep = work.space()->reg().complement(ports);
    DensityOperator acc = DensityOperator::zero(FockSpace::create(work.space()->reg().subset(keep), work.space()->nmax()));
    double prob = 0.0;
    Eigen::ArrayXd click_a = herald_click_element(work.space(), det, port_a);
    Eigen::ArrayXd dark_a = herald_dark_element(work.space(), det, port_a);
    Eigen::ArrayXd click_b = herald_click_element(work.space(), det, port_b);
    Eigen::ArrayXd dark_b = herald_dark_element(work.space(), det, port_b);
    {
        auto [cond, p] = project(work, Eigen::ArrayXd(click_a * dark_b));
        prob += p;
        acc.accumulate(partial_trace(cond, keep));
    }
    {
        auto [cond, p] = project(work, Eigen::ArrayXd(dark_a * click_b));
        prob += p;
        DensityOperator reduced = partial_trace(cond, keep);
        acc.accumulate(apply_diagonal(reduced, phase_flip_diagonal(reduced.space(), correction_mode)));
    }
    return {std::move(acc), prob};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// full pipelines

/// The corrected channel: pair source feeding (f,e) and (h,g), added loss L
/// on e, heralded amplification of e against the biased ancilla resource,
/// entanglement swap between g and f, output state on (h, v). Probabilities
/// are per pulse: p_channel_ready conditions on the amplifier and ancilla
/// heralds, p_state_sent additionally on the swap herald.
inline PipelineResult corrected_channel(const ExperimentConfig& cfg) {
    cfg.validate();
    const int cap = cfg.joint_cap();
    double dropped = 0.0;

    if (cfg.engine == PipelineEngine::kDense) {
        detail::BranchSet src1 = detail::main_source(cfg);
        detail::BranchSet src2 = detail::ancilla_source(cfg);
        DensityOperator rho1 = DensityOperator::zero(src1.branches.front().space());
        for (const auto& b : src1.branches) rho1.accumulate(b);
        DensityOperator rho2 = DensityOperator::zero(src2.branches.empty()
                                                         ? FockSpace::create({"a", "v"}, cfg.n_max)
                                                         : src2.branches.front().space());
        for (const auto& b : src2.branches) rho2.accumulate(b);
        double drop = 0.0;
        DensityOperator joint = tensor(rho1, rho2, cap, &drop);
        dropped += drop;
        joint = apply_loss(joint, cfg.channel_transmission() * cfg.delivery.e, "e");

        auto [post_ha, p_ready] = detail::scissors_stage_dense(joint, "e", "a", cfg.xi_ha, cfg.amplifier.detector, "v");
        auto [rho_hv, p_sent] = detail::scissors_stage_dense(post_ha, "g", "f", cfg.xi_es, cfg.es_detector, "v");
        PipelineResult result{p_sent > 0 ? rho_hv.normalized() : rho_hv, p_ready, p_sent, dropped};
        return result;
    }

    detail::BranchSet src1 = detail::main_source(cfg);
    detail::BranchSet src2 = detail::ancilla_source(cfg);

    detail::BranchSet joint;
    for (const auto& b1 : src1.branches)
        for (const auto& b2 : src2.branches) {
            double drop = 0.0;
            PureState j = tensor(b1, b2, cap, &drop);
            dropped += drop;
            if (j.norm_squared() > detail::kBranchPrune) joint.branches.push_back(std::move(j));
        }
    detail::branch_loss(joint, cfg.channel_transmission() * cfg.delivery.e, "e");

    // amplifier stage: consume (e, a), write onto v, accumulate on (f,h,g,v)
    auto post_ha_space = FockSpace::create(
        joint.branches.empty() ? std::vector<std::string>{"f", "h", "g", "v"}
                               : joint.branches.front().space()->reg().complement({"e", "a"}),
        cap);
    DensityOperator post_ha = DensityOperator::zero(post_ha_space);
    double p_ready = detail::scissors_stage(joint, "e", "a", cfg.xi_ha, cfg.amplifier.detector, "v", post_ha);

    // swap stage: re-expand the mixed post-amplifier state into pure
    // branches (cheap on the reduced space), consume (g, f), leave (h, v)
    detail::BranchSet es_in;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(post_ha.matrix());
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        double w = es.eigenvalues()(k);
        if (w > detail::kBranchPrune)
            es_in.branches.emplace_back(post_ha.space(), Eigen::VectorXcd(std::sqrt(w) * es.eigenvectors().col(k)));
    }
    DensityOperator rho_hv = DensityOperator::zero(FockSpace::create({"h", "v"}, cap));
    double p_sent = detail::scissors_stage(es_in, "g", "f", cfg.xi_es, cfg.es_detector, "v", rho_hv);

    PipelineResult result{p_sent > 0 ? rho_hv.normalized() : rho_hv, p_ready, p_sent, dropped};
    return result;
}

/// Direct transmission baseline: the same pair source prepares the
/// path-entangled state on (f, e), e traverses the loss, the idler heralds
/// the pair on a threshold click. Returns the normalized state on (f, e)
/// and the per-pulse herald probability. `transmission_override`, when in
/// [0, 1], replaces the channel transmission 1 - L (used by the
/// effective-transmission inversion).
inline std::pair<DensityOperator, double> direct_transmission(const ExperimentConfig& cfg,
                                                              double transmission_override = -1.0) {
    cfg.validate();
    double T = transmission_override >= 0.0 ? transmission_override : cfg.channel_transmission();
    PureState pair = spdc_state(SourceSpec{cfg.pair_probability, 1.0}, "f", "__idler", cfg.n_max);
    PureState widened = tensor(pair, PureState::vacuum(FockSpace::create({"e"}, 0)), cfg.n_max);
    widened = apply_two_mode(widened, half_wave_plate(M_PI / 8.0), "f", "e");

    DensityOperator rho = DensityOperator::from_pure(widened);
    if (cfg.delivery.f < 1.0) rho = apply_loss(rho, cfg.delivery.f, "f");
    rho = apply_loss(rho, T * cfg.delivery.e, "e");

    HeraldPattern pattern;
    pattern.fixed.push_back({DetectorPort{"__idler"}, cfg.ancilla_detector, PortOutcome::kClick, 0});
    auto [rho_fe, prob] = herald(rho, pattern);
    return {prob > 0 ? rho_fe.normalized() : rho_fe, prob};
}

/// Biased-entanglement channel: one arm of sqrt(eps)|01> + sqrt(1-eps)|10>
/// through loss T, then ideal (photon-number-resolved, unit-delivery)
/// amplification with the matched gain g sqrt(eps T) = sqrt(1-eps).
/// Returns the normalized state on (k, v).
inline DensityOperator biased_corrected_channel(double eps, double T, int cap = 3) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("biased_corrected_channel: eps outside (0,1)");
    if (T <= 0.0 || T > 1.0) throw std::invalid_argument("biased_corrected_channel: transmission outside (0,1]");
    auto space = FockSpace::create({"k", "s"}, cap);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space->dim());
    amps(space->index_of({0, 1})) = std::sqrt(eps);
    amps(space->index_of({1, 0})) = std::sqrt(1.0 - eps);
    DensityOperator rho = DensityOperator::from_pure(PureState(space, std::move(amps)));
    rho = apply_loss(rho, T, "s");

    double g = std::sqrt((1.0 - eps) / (eps * T));
    AmplifierSpec nla{1.0 / (1.0 + g * g), 1.0, DetectorModel{DetectorKind::kPnr, 1.0}};
    auto [out, p] = heralded_amplifier(rho, "s", nla, "v");
    return out.normalized();
}

}  // namespace qcorr

#endif  // QCORR_PROTOCOLS_HPP
