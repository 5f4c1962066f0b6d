#ifndef QCORR_DETECTION_HPP
#define QCORR_DETECTION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "qcorr/fock.hpp"

// Detector POVMs (threshold and photon-number-resolving, with efficiency),
// heralding-pattern evaluation and conditional-state extraction. Detectors
// are destructive: heralded modes are always traced out of the conditional
// state. Dark counts are not modeled; noise enters through higher-order
// source emission instead.

namespace qcorr {

enum class DetectorKind { kThreshold, kPnr };

struct DetectorModel {
    DetectorKind kind = DetectorKind::kThreshold;
    double efficiency = 1.0;

    void validate() const {
        if (efficiency < 0.0 || efficiency > 1.0)
            throw std::invalid_argument("DetectorModel: efficiency outside [0,1]");
    }
};

/// A detector port may collect several internal sub-modes; outcomes depend
/// only on the total photon number across the group.
using DetectorPort = std::vector<std::string>;

namespace detail {

inline int port_total(const SpacePtr& space, const DetectorPort& port, const Occupation& occ) {
    int t = 0;
    for (const auto& m : port) t += occ[space->reg().index_of(m)];
    return t;
}

}  // namespace detail

/// No-click element of a threshold detector: (1-eff)^n over the port total.
inline Eigen::ArrayXd threshold_noclick_element(const SpacePtr& space, const DetectorPort& port, double efficiency) {
    std::vector<int> pos;
    for (const auto& m : port) pos.push_back(space->reg().index_of(m));
    return occupation_diagonal(space, [&](const Occupation& occ) {
        int n = 0;
        for (int p : pos) n += occ[p];
        return std::pow(1.0 - efficiency, n);
    });
}

inline Eigen::ArrayXd threshold_click_element(const SpacePtr& space, const DetectorPort& port, double efficiency) {
    return 1.0 - threshold_noclick_element(space, port, efficiency);
}

/// PNR element for registering exactly k counts: true photon number n >= k
/// mixes in binomially through the efficiency.
inline Eigen::ArrayXd pnr_element(const SpacePtr& space, const DetectorPort& port, int k, double efficiency) {
    std::vector<int> pos;
    for (const auto& m : port) pos.push_back(space->reg().index_of(m));
    return occupation_diagonal(space, [&](const Occupation& occ) {
        int n = 0;
        for (int p : pos) n += occ[p];
        return detail::binomial(n, k) * std::pow(efficiency, k) * std::pow(1.0 - efficiency, n - k);
    });
}

/// Complete POVM of a detector on a port. Threshold: {no-click, click}.
/// PNR: one element per count k = 0..nmax.
inline std::vector<Eigen::ArrayXd> povm_elements(const SpacePtr& space, const DetectorModel& d,
                                                 const DetectorPort& port) {
    d.validate();
    std::vector<Eigen::ArrayXd> out;
    if (d.kind == DetectorKind::kThreshold) {
        out.push_back(threshold_noclick_element(space, port, d.efficiency));
        out.push_back(threshold_click_element(space, port, d.efficiency));
    } else {
        for (int k = 0; k <= space->nmax(); ++k) out.push_back(pnr_element(space, port, k, d.efficiency));
    }
    return out;
}

/// "Click" for heralding purposes: any detection for a threshold detector,
/// exactly one count for a PNR detector.
inline Eigen::ArrayXd herald_click_element(const SpacePtr& space, const DetectorModel& d, const DetectorPort& port) {
    return d.kind == DetectorKind::kThreshold ? threshold_click_element(space, port, d.efficiency)
                                              : pnr_element(space, port, 1, d.efficiency);
}

inline Eigen::ArrayXd herald_dark_element(const SpacePtr& space, const DetectorModel& d, const DetectorPort& port) {
    return d.kind == DetectorKind::kThreshold ? threshold_noclick_element(space, port, d.efficiency)
                                              : pnr_element(space, port, 0, d.efficiency);
}

// ---------------------------------------------------------------------------
// herald patterns

enum class PortOutcome { kClick, kNoClick, kExactly };

struct PortRequirement {
    DetectorPort port;
    DetectorModel detector;
    PortOutcome outcome = PortOutcome::kClick;
    int count = 0;  // used by kExactly (forces a PNR element)
};

/// One-and-only-one click across the listed ports (the partner ports are
/// required dark), evaluated as an exclusive-or sum of outcomes.
struct ExclusiveGroup {
    std::vector<DetectorPort> ports;
    DetectorModel detector;
};

struct HeraldPattern {
    std::vector<PortRequirement> fixed;
    std::vector<ExclusiveGroup> exclusive;

    bool empty() const { return fixed.empty() && exclusive.empty(); }

    std::vector<std::string> measured_modes() const {
        std::vector<std::string> out;
        for (const auto& r : fixed) out.insert(out.end(), r.port.begin(), r.port.end());
        for (const auto& g : exclusive)
            for (const auto& p : g.ports) out.insert(out.end(), p.begin(), p.end());
        return out;
    }
};

namespace detail {

inline Eigen::ArrayXd requirement_element(const SpacePtr& space, const PortRequirement& r) {
    switch (r.outcome) {
        case PortOutcome::kClick:
            return herald_click_element(space, r.detector, r.port);
        case PortOutcome::kNoClick:
            return herald_dark_element(space, r.detector, r.port);
        case PortOutcome::kExactly:
            return pnr_element(space, r.port, r.count, r.detector.efficiency);
    }
    throw std::logic_error("requirement_element: unreachable");
}

/// Expands a pattern into the diagonal element of every satisfying outcome.
inline std::vector<Eigen::ArrayXd> outcome_elements(const SpacePtr& space, const HeraldPattern& pattern) {
    Eigen::ArrayXd base = Eigen::ArrayXd::Ones(space->dim());
    for (const auto& r : pattern.fixed) base *= requirement_element(space, r);
    std::vector<Eigen::ArrayXd> outcomes{base};
    for (const auto& g : pattern.exclusive) {
        std::vector<Eigen::ArrayXd> expanded;
        for (std::size_t winner = 0; winner < g.ports.size(); ++winner) {
            Eigen::ArrayXd e = herald_click_element(space, g.detector, g.ports[winner]);
            for (std::size_t other = 0; other < g.ports.size(); ++other)
                if (other != winner) e *= herald_dark_element(space, g.detector, g.ports[other]);
            for (const auto& prev : outcomes) expanded.push_back(prev * e);
        }
        outcomes = std::move(expanded);
    }
    return outcomes;
}

}  // namespace detail

/// Conditional state for a herald pattern: sums sqrt(e) rho sqrt(e) over all
/// detector outcome combinations satisfying the pattern, traces out the
/// measured modes, and returns the total outcome probability. The state is
/// kept sub-normalized (trace_weight == probability).
inline std::pair<DensityOperator, double> herald(const DensityOperator& rho, const HeraldPattern& pattern) {
    if (pattern.empty()) throw std::invalid_argument("herald: empty pattern");
    auto keep = rho.space()->reg().complement(pattern.measured_modes());
    DensityOperator acc = DensityOperator::zero(FockSpace::create(rho.space()->reg().subset(keep), rho.space()->nmax()));
    double prob = 0.0;
    for (const auto& e : detail::outcome_elements(rho.space(), pattern)) {
        auto [cond, p] = project(rho, e);
        prob += p;
        acc.accumulate(partial_trace(cond, keep));
    }
    return {std::move(acc), prob};
}

}  // namespace qcorr

#endif  // QCORR_DETECTION_HPP
