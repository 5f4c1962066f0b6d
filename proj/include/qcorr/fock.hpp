#ifndef QCORR_FOCK_HPP
#define QCORR_FOCK_HPP

#include <algorithm>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

// Exact multimode Fock-space linear algebra under a total-photon-number
// truncation: mode registers, pure states, density operators, tensor
// products, partial traces, subset unitaries and POVM projections.
//
// All values are immutable after construction; every operation is a pure
// function returning a new value, so states can be shared freely across
// threads.

namespace qcorr {

using cd = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<cd>;

constexpr double kHermTol = 1e-10;
constexpr double kPruneThreshold = 1e-14;

/// Photon counts per mode, aligned with a ModeRegister's ordering.
using Occupation = std::vector<int>;

namespace detail {

struct OccupationHash {
    std::size_t operator()(const Occupation& occ) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int n : occ) {
            h ^= static_cast<std::size_t>(n) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
    return b;
}

}  // namespace detail

/// Ordered set of mode labels. The ordering fixes the basis ordering of
/// every state built on top of it and never changes after construction.
class ModeRegister {
  public:
    ModeRegister() = default;

    explicit ModeRegister(std::vector<std::string> labels) : labels_(std::move(labels)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            auto [it, fresh] = index_.emplace(labels_[i], static_cast<int>(i));
            if (!fresh) throw std::invalid_argument("ModeRegister: duplicate label '" + labels_[i] + "'");
        }
    }

    int size() const { return static_cast<int>(labels_.size()); }

    const std::vector<std::string>& labels() const { return labels_; }

    const std::string& label(int i) const { return labels_.at(i); }

    bool contains(const std::string& label) const { return index_.count(label) > 0; }

    int index_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw std::invalid_argument("ModeRegister: unknown label '" + label + "'");
        return it->second;
    }

    std::vector<int> indices_of(const std::vector<std::string>& labels) const {
        std::vector<int> out;
        out.reserve(labels.size());
        for (const auto& l : labels) out.push_back(index_of(l));
        return out;
    }

    /// Concatenation; throws on label collision.
    ModeRegister concat(const ModeRegister& other) const {
        std::vector<std::string> merged = labels_;
        for (const auto& l : other.labels_) {
            if (contains(l)) throw std::invalid_argument("ModeRegister: label collision on '" + l + "'");
            merged.push_back(l);
        }
        return ModeRegister(std::move(merged));
    }

    ModeRegister subset(const std::vector<std::string>& keep) const {
        std::vector<std::string> out;
        for (const auto& l : keep) {
            index_of(l);  // existence check
            out.push_back(l);
        }
        return ModeRegister(std::move(out));
    }

    /// Labels not in `removed`, in register order.
    std::vector<std::string> complement(const std::vector<std::string>& removed) const {
        std::vector<std::string> out;
        for (const auto& l : labels_)
            if (std::find(removed.begin(), removed.end(), l) == removed.end()) out.push_back(l);
        return out;
    }

    bool operator==(const ModeRegister& other) const { return labels_ == other.labels_; }

  private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

/// Enumerated basis of all occupation vectors with total photon number
/// <= nmax, ordered by total photon number first and lexicographically
/// within each total. The ordering is deterministic, so matrices built on
/// the same register and cap are reproducible bit for bit.
class FockSpace {
  public:
    static std::shared_ptr<const FockSpace> create(ModeRegister reg, int nmax) {
        return std::shared_ptr<const FockSpace>(new FockSpace(std::move(reg), nmax));
    }

    static std::shared_ptr<const FockSpace> create(std::vector<std::string> labels, int nmax) {
        return create(ModeRegister(std::move(labels)), nmax);
    }

    const ModeRegister& reg() const { return reg_; }
    int nmax() const { return nmax_; }
    int dim() const { return static_cast<int>(basis_.size()); }

    const Occupation& occupation(int i) const { return basis_.at(i); }

    int total(int i) const {
        const auto& occ = basis_.at(i);
        int t = 0;
        for (int n : occ) t += n;
        return t;
    }

    int index_of(const Occupation& occ) const {
        auto it = index_.find(occ);
        if (it == index_.end()) throw std::invalid_argument("FockSpace: occupation outside truncated basis");
        return it->second;
    }

    /// -1 when the occupation lies outside the truncation.
    int find(const Occupation& occ) const {
        auto it = index_.find(occ);
        return it == index_.end() ? -1 : it->second;
    }

  private:
    FockSpace(ModeRegister reg, int nmax) : reg_(std::move(reg)), nmax_(nmax) {
        if (nmax < 0) throw std::invalid_argument("FockSpace: negative truncation");
        const int m = reg_.size();
        if (m == 0) {
            basis_.push_back({});
            index_.emplace(Occupation{}, 0);
            return;
        }
        Occupation occ(m, 0);
        for (int total = 0; total <= nmax_; ++total) enumerate(occ, 0, total);
        for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], static_cast<int>(i));
    }

    void enumerate(Occupation& occ, int mode, int remaining) {
        const int m = reg_.size();
        if (mode == m - 1) {
            occ[mode] = remaining;
            basis_.push_back(occ);
            return;
        }
        for (int n = 0; n <= remaining; ++n) {
            occ[mode] = n;
            enumerate(occ, mode + 1, remaining - n);
        }
        occ[mode] = 0;
    }

    ModeRegister reg_;
    int nmax_ = 0;
    std::vector<Occupation> basis_;
    std::unordered_map<Occupation, int, detail::OccupationHash> index_;
};

using SpacePtr = std::shared_ptr<const FockSpace>;

/// Complex amplitudes over a truncated Fock basis. Not necessarily
/// normalized: heralded branches keep norm^2 = branch probability so that
/// probability bookkeeping composes.
class PureState {
  public:
    PureState() = default;

    PureState(SpacePtr space, Eigen::VectorXcd amps) : space_(std::move(space)), amps_(std::move(amps)) {
        if (amps_.size() != space_->dim()) throw std::invalid_argument("PureState: amplitude/basis size mismatch");
    }

    static PureState vacuum(SpacePtr space) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
        v(space->index_of(Occupation(space->reg().size(), 0))) = 1.0;
        return PureState(std::move(space), std::move(v));
    }

    static PureState basis_state(SpacePtr space, const Occupation& occ) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
        v(space->index_of(occ)) = 1.0;
        return PureState(std::move(space), std::move(v));
    }

    const SpacePtr& space() const { return space_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }
    Eigen::VectorXcd& amplitudes() { return amps_; }

    cd amplitude(const Occupation& occ) const {
        int i = space_->find(occ);
        return i < 0 ? cd(0.0) : amps_(i);
    }

    double norm_squared() const { return amps_.squaredNorm(); }

    PureState normalized() const {
        double n = amps_.norm();
        if (n < 1e-150) throw std::runtime_error("PureState: cannot normalize a null state");
        return PureState(space_, amps_ / n);
    }

    /// Drops amplitudes below the magnitude threshold.
    PureState pruned(double eps = kPruneThreshold) const {
        Eigen::VectorXcd v = amps_;
        for (Eigen::Index i = 0; i < v.size(); ++i)
            if (std::abs(v(i)) < eps) v(i) = 0.0;
        return PureState(space_, std::move(v));
    }

  private:
    SpacePtr space_;
    Eigen::VectorXcd amps_;
};

/// Dense Hermitian operator over the truncated basis. trace_weight() stays
/// sub-normalized after heralding (it equals the event probability).
class DensityOperator {
  public:
    DensityOperator() = default;

    DensityOperator(SpacePtr space, Eigen::MatrixXcd mat) : space_(std::move(space)), mat_(std::move(mat)) {
        if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim())
            throw std::invalid_argument("DensityOperator: matrix/basis size mismatch");
    }

    static DensityOperator from_pure(const PureState& psi) {
        return DensityOperator(psi.space(), psi.amplitudes() * psi.amplitudes().adjoint());
    }

    static DensityOperator zero(SpacePtr space) {
        int d = space->dim();
        return DensityOperator(std::move(space), Eigen::MatrixXcd::Zero(d, d));
    }

    const SpacePtr& space() const { return space_; }
    const Eigen::MatrixXcd& matrix() const { return mat_; }
    Eigen::MatrixXcd& matrix() { return mat_; }

    double trace_weight() const { return mat_.trace().real(); }

    cd element(const Occupation& ket, const Occupation& bra) const {
        int i = space_->find(ket), j = space_->find(bra);
        if (i < 0 || j < 0) return 0.0;
        return mat_(i, j);
    }

    DensityOperator normalized() const {
        double t = trace_weight();
        if (t < 1e-150) throw std::runtime_error("DensityOperator: cannot normalize zero-trace operator");
        return DensityOperator(space_, mat_ / t);
    }

    double purity() const {
        double t = trace_weight();
        return (mat_ * mat_).trace().real() / (t * t);
    }

    void accumulate(const PureState& psi) { mat_ += psi.amplitudes() * psi.amplitudes().adjoint(); }
    void accumulate(const DensityOperator& rho) { mat_ += rho.matrix(); }

    /// Hermiticity / positivity / finite-trace sanity check.
    void validate(double tol = kHermTol) const {
        if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw std::runtime_error("DensityOperator: not Hermitian within tolerance");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9)
            throw std::runtime_error("DensityOperator: negative eigenvalue beyond tolerance");
    }

  private:
    SpacePtr space_;
    Eigen::MatrixXcd mat_;
};

// ---------------------------------------------------------------------------
// tensor products

namespace detail {

/// Index bookkeeping for splitting a space into (subset, rest).
struct SubsetView {
    SpacePtr sub_space;
    SpacePtr rest_space;
    std::vector<int> sub_index;   // full index -> subset-space index
    std::vector<int> rest_index;  // full index -> rest-space index
};

inline SubsetView make_subset_view(const SpacePtr& space, const std::vector<std::string>& subset) {
    SubsetView view;
    const auto& reg = space->reg();
    std::vector<int> sub_pos = reg.indices_of(subset);
    std::vector<std::string> rest_labels = reg.complement(subset);
    std::vector<int> rest_pos = reg.indices_of(rest_labels);

    view.sub_space = FockSpace::create(reg.subset(subset), space->nmax());
    view.rest_space = FockSpace::create(ModeRegister(rest_labels), space->nmax());
    const int d = space->dim();
    view.sub_index.resize(d);
    view.rest_index.resize(d);
    Occupation sub_occ(sub_pos.size()), rest_occ(rest_pos.size());
    for (int i = 0; i < d; ++i) {
        const auto& occ = space->occupation(i);
        for (std::size_t k = 0; k < sub_pos.size(); ++k) sub_occ[k] = occ[sub_pos[k]];
        for (std::size_t k = 0; k < rest_pos.size(); ++k) rest_occ[k] = occ[rest_pos[k]];
        view.sub_index[i] = view.sub_space->index_of(sub_occ);
        view.rest_index[i] = view.rest_space->index_of(rest_occ);
    }
    return view;
}

}  // namespace detail

/// Joint state on the concatenated register, truncated at `nmax_out`
/// (default: sum of the factor truncations, i.e. lossless). Basis pairs
/// exceeding the target truncation are dropped; their total squared weight
/// is reported through `dropped_weight` when provided.
inline PureState tensor(const PureState& a, const PureState& b, int nmax_out = -1,
                        double* dropped_weight = nullptr) {
    if (nmax_out < 0) nmax_out = a.space()->nmax() + b.space()->nmax();
    auto space = FockSpace::create(a.space()->reg().concat(b.space()->reg()), nmax_out);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
    double dropped = 0.0;
    const int da = a.space()->dim(), db = b.space()->dim();
    Occupation joint;
    for (int i = 0; i < da; ++i) {
        cd ai = a.amplitudes()(i);
        if (ai == cd(0.0)) continue;
        const auto& oa = a.space()->occupation(i);
        for (int j = 0; j < db; ++j) {
            cd bj = b.amplitudes()(j);
            if (bj == cd(0.0)) continue;
            const auto& ob = b.space()->occupation(j);
            joint = oa;
            joint.insert(joint.end(), ob.begin(), ob.end());
            int idx = space->find(joint);
            if (idx < 0) {
                dropped += std::norm(ai * bj);
                continue;
            }
            v(idx) = ai * bj;
        }
    }
    if (dropped_weight) *dropped_weight = dropped;
    return PureState(std::move(space), std::move(v));
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b, int nmax_out = -1,
                              double* dropped_weight = nullptr) {
    if (nmax_out < 0) nmax_out = a.space()->nmax() + b.space()->nmax();
    auto space = FockSpace::create(a.space()->reg().concat(b.space()->reg()), nmax_out);
    const int da = a.space()->dim(), db = b.space()->dim(), d = space->dim();
    // map (ia, ib) -> joint index, -1 when truncated away
    std::vector<int> joint_index(static_cast<std::size_t>(da) * db, -1);
    Occupation joint;
    for (int ia = 0; ia < da; ++ia) {
        const auto& oa = a.space()->occupation(ia);
        for (int ib = 0; ib < db; ++ib) {
            const auto& ob = b.space()->occupation(ib);
            joint = oa;
            joint.insert(joint.end(), ob.begin(), ob.end());
            joint_index[static_cast<std::size_t>(ia) * db + ib] = space->find(joint);
        }
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    double dropped = 0.0;
    for (int ia = 0; ia < da; ++ia)
        for (int ib = 0; ib < db; ++ib) {
            int row = joint_index[static_cast<std::size_t>(ia) * db + ib];
            cd w = a.matrix()(ia, ia) * b.matrix()(ib, ib);
            if (row < 0) {
                dropped += std::real(w);
                continue;
            }
            for (int ja = 0; ja < da; ++ja) {
                if (a.matrix()(ia, ja) == cd(0.0)) continue;
                for (int jb = 0; jb < db; ++jb) {
                    int col = joint_index[static_cast<std::size_t>(ja) * db + jb];
                    if (col < 0) continue;
                    cd val = a.matrix()(ia, ja) * b.matrix()(ib, jb);
                    if (val != cd(0.0)) m(row, col) += val;
                }
            }
        }
    if (dropped_weight) *dropped_weight = dropped;
    return DensityOperator(std::move(space), std::move(m));
}

// ---------------------------------------------------------------------------
// partial trace

/// Reduced operator on `keep`; trace is preserved.
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
    auto view = detail::make_subset_view(rho.space(), keep);
    const int d = rho.space()->dim();
    // group basis indices by the traced-out (rest) configuration
    std::unordered_map<int, std::vector<int>> groups;
    for (int i = 0; i < d; ++i) groups[view.rest_index[i]].push_back(i);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(view.sub_space->dim(), view.sub_space->dim());
    for (const auto& [rest, members] : groups)
        for (int i : members)
            for (int j : members) {
                cd v = rho.matrix()(i, j);
                if (v != cd(0.0)) out(view.sub_index[i], view.sub_index[j]) += v;
            }
    return DensityOperator(view.sub_space, std::move(out));
}

/// Components of a pure state grouped by the occupation of the modes being
/// measured away: |psi> = sum_k |k>_traced (x) |chi_k>_kept. Each returned
/// component is sub-normalized (its norm^2 is the branch weight). This is
/// the pure-state form of the partial trace.
inline std::vector<std::pair<Occupation, PureState>> split_by_occupation(
    const PureState& psi, const std::vector<std::string>& traced) {
    auto keep = psi.space()->reg().complement(traced);
    auto view = detail::make_subset_view(psi.space(), keep);
    // view.rest_space enumerates the traced modes
    std::unordered_map<int, Eigen::VectorXcd> comps;
    const int d = psi.space()->dim();
    for (int i = 0; i < d; ++i) {
        cd a = psi.amplitudes()(i);
        if (a == cd(0.0)) continue;
        auto [it, fresh] = comps.try_emplace(view.rest_index[i]);
        if (fresh) it->second = Eigen::VectorXcd::Zero(view.sub_space->dim());
        it->second(view.sub_index[i]) += a;
    }
    std::vector<std::pair<Occupation, PureState>> out;
    out.reserve(comps.size());
    for (auto& [rest, vec] : comps)
        out.emplace_back(view.rest_space->occupation(rest), PureState(view.sub_space, std::move(vec)));
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

inline DensityOperator partial_trace(const PureState& psi, const std::vector<std::string>& keep) {
    auto view = detail::make_subset_view(psi.space(), keep);
    std::unordered_map<int, Eigen::VectorXcd> comps;
    const int d = psi.space()->dim();
    for (int i = 0; i < d; ++i) {
        cd a = psi.amplitudes()(i);
        if (a == cd(0.0)) continue;
        auto [it, fresh] = comps.try_emplace(view.rest_index[i]);
        if (fresh) it->second = Eigen::VectorXcd::Zero(view.sub_space->dim());
        it->second(view.sub_index[i]) += a;
    }
    DensityOperator out = DensityOperator::zero(view.sub_space);
    for (const auto& [rest, vec] : comps) out.matrix() += vec * vec.adjoint();
    return out;
}

// ---------------------------------------------------------------------------
// operators on mode subsets

/// Lift of a single-photon two-mode map to all photon-number sectors of the
/// full space. `u` acts on the creation operators of modes (i, j):
///   a_i^dag -> u(0,0) a_i^dag + u(1,0) a_j^dag
///   a_j^dag -> u(0,1) a_i^dag + u(1,1) a_j^dag
/// Photon number is conserved, so the lift never leaks past the truncation.
inline SparseCd lift_two_mode(const SpacePtr& space, const Eigen::Matrix2cd& u, const std::string& mode_i,
                              const std::string& mode_j) {
    const int pi = space->reg().index_of(mode_i);
    const int pj = space->reg().index_of(mode_j);
    if (pi == pj) throw std::invalid_argument("lift_two_mode: modes must differ");
    const int d = space->dim();
    std::vector<Eigen::Triplet<cd>> trips;
    // cache per-(m,n) output amplitudes: (a^dag_i)^m (a^dag_j)^n expanded
    // through u gives sum_k c_k |k, m+n-k>
    std::unordered_map<int, std::vector<cd>> sector_cache;
    auto sector_key = [](int m, int n) { return m * 64 + n; };
    auto expand = [&](int m, int n) -> const std::vector<cd>& {
        auto it = sector_cache.find(sector_key(m, n));
        if (it != sector_cache.end()) return it->second;
        const int total = m + n;
        std::vector<cd> amps(total + 1, cd(0.0));
        // binomial expansion of (u00 ai + u10 aj)^m (u01 ai + u11 aj)^n
        for (int r = 0; r <= m; ++r)
            for (int s = 0; s <= n; ++s) {
                int k = r + s;  // photons ending in mode i
                cd coeff = detail::binomial(m, r) * detail::binomial(n, s) * std::pow(u(0, 0), r) *
                           std::pow(u(1, 0), m - r) * std::pow(u(0, 1), s) * std::pow(u(1, 1), n - s);
                amps[k] += coeff;
            }
        // operator-monomial coefficients -> normalized Fock amplitudes
        double in_norm = std::sqrt(detail::factorial(m) * detail::factorial(n));
        for (int k = 0; k <= total; ++k)
            amps[k] *= std::sqrt(detail::factorial(k) * detail::factorial(total - k)) / in_norm;
        return sector_cache.emplace(sector_key(m, n), std::move(amps)).first->second;
    };

    Occupation target;
    for (int col = 0; col < d; ++col) {
        const auto& occ = space->occupation(col);
        const int m = occ[pi], n = occ[pj];
        if (m + n == 0) {
            trips.emplace_back(col, col, cd(1.0));
            continue;
        }
        const auto& amps = expand(m, n);
        target = occ;
        for (int k = 0; k <= m + n; ++k) {
            if (amps[k] == cd(0.0)) continue;
            target[pi] = k;
            target[pj] = m + n - k;
            trips.emplace_back(space->index_of(target), col, amps[k]);
        }
    }
    SparseCd op(d, d);
    op.setFromTriplets(trips.begin(), trips.end());
    return op;
}

inline bool is_unitary(const Eigen::Matrix2cd& u, double tol = kHermTol) {
    return ((u.adjoint() * u) - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= tol;
}

/// Applies a two-mode single-photon unitary, lifted multiplicatively to all
/// photon numbers. Throws when `u` is not unitary.
inline PureState apply_two_mode(const PureState& psi, const Eigen::Matrix2cd& u, const std::string& mode_i,
                                const std::string& mode_j) {
    if (!is_unitary(u)) throw std::invalid_argument("apply_two_mode: matrix is not unitary");
    SparseCd op = lift_two_mode(psi.space(), u, mode_i, mode_j);
    return PureState(psi.space(), op * psi.amplitudes());
}

inline DensityOperator apply_two_mode(const DensityOperator& rho, const Eigen::Matrix2cd& u,
                                      const std::string& mode_i, const std::string& mode_j) {
    if (!is_unitary(u)) throw std::invalid_argument("apply_two_mode: matrix is not unitary");
    SparseCd op = lift_two_mode(rho.space(), u, mode_i, mode_j);
    Eigen::MatrixXcd m = op * rho.matrix() * op.adjoint();
    return DensityOperator(rho.space(), std::move(m));
}

/// General sparse operator application (same space in and out).
inline PureState apply_operator(const PureState& psi, const SparseCd& op) {
    return PureState(psi.space(), op * psi.amplitudes());
}

inline DensityOperator apply_operator(const DensityOperator& rho, const SparseCd& op) {
    Eigen::MatrixXcd m = op * rho.matrix() * op.adjoint();
    return DensityOperator(rho.space(), std::move(m));
}

/// Occupation-diagonal operator, stored as its basis diagonal.
inline PureState apply_diagonal(const PureState& psi, const Eigen::ArrayXcd& diag) {
    return PureState(psi.space(), (psi.amplitudes().array() * diag).matrix());
}

inline DensityOperator apply_diagonal(const DensityOperator& rho, const Eigen::ArrayXcd& diag) {
    Eigen::MatrixXcd m = diag.matrix().asDiagonal() * rho.matrix() * diag.matrix().conjugate().asDiagonal();
    return DensityOperator(rho.space(), std::move(m));
}

/// diag over the basis of f(occupation), for occupation-number functions.
template <typename F>
Eigen::ArrayXd occupation_diagonal(const SpacePtr& space, F&& f) {
    Eigen::ArrayXd d(space->dim());
    for (int i = 0; i < space->dim(); ++i) d(i) = f(space->occupation(i));
    return d;
}

/// (-1)^n on one mode; the feed-forward phase correction primitive.
inline Eigen::ArrayXcd phase_flip_diagonal(const SpacePtr& space, const std::string& mode) {
    const int p = space->reg().index_of(mode);
    Eigen::ArrayXcd d(space->dim());
    for (int i = 0; i < space->dim(); ++i) d(i) = (space->occupation(i)[p] % 2 == 0) ? 1.0 : -1.0;
    return d;
}

/// Relabels modes without touching amplitudes (pure routing, e.g. a PBS).
/// `mapping` lists (from, to) label pairs; contents of the paired modes are
/// swapped, so the map is its own inverse and manifestly unitary.
inline PureState swap_modes(const PureState& psi, const std::vector<std::pair<std::string, std::string>>& mapping) {
    const auto& space = psi.space();
    std::vector<std::pair<int, int>> pos;
    for (const auto& [from, to] : mapping) {
        int a = space->reg().index_of(from), b = space->reg().index_of(to);
        if (a == b) throw std::invalid_argument("swap_modes: identical labels");
        pos.emplace_back(a, b);
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
    Occupation occ;
    for (int i = 0; i < space->dim(); ++i) {
        if (psi.amplitudes()(i) == cd(0.0)) continue;
        occ = space->occupation(i);
        for (auto [a, b] : pos) std::swap(occ[a], occ[b]);
        v(space->index_of(occ)) = psi.amplitudes()(i);
    }
    return PureState(space, std::move(v));
}

// ---------------------------------------------------------------------------
// POVM projection

/// sqrt(e) rho sqrt(e) for a diagonal POVM element, kept sub-normalized;
/// the returned probability is Tr(e rho).
inline std::pair<DensityOperator, double> project(const DensityOperator& rho, const Eigen::ArrayXd& element) {
    if ((element < -kHermTol).any() || (element > 1.0 + kHermTol).any())
        throw std::invalid_argument("project: POVM element outside [0, I]");
    Eigen::ArrayXd clamped = element.max(0.0);
    double prob = (clamped * rho.matrix().diagonal().real().array()).sum();
    Eigen::ArrayXd root = clamped.sqrt();
    Eigen::MatrixXcd m = root.matrix().asDiagonal() * rho.matrix() * root.matrix().asDiagonal();
    return {DensityOperator(rho.space(), std::move(m)), prob};
}

/// Dense-element overload for general (non-diagonal) POVM elements.
inline std::pair<DensityOperator, double> project(const DensityOperator& rho, const Eigen::MatrixXcd& element) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(element);
    if (es.eigenvalues().minCoeff() < -kHermTol || es.eigenvalues().maxCoeff() > 1.0 + kHermTol)
        throw std::invalid_argument("project: POVM element outside [0, I]");
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXcd root = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    double prob = (element * rho.matrix()).trace().real();
    Eigen::MatrixXcd m = root * rho.matrix() * root;
    return {DensityOperator(rho.space(), std::move(m)), prob};
}

inline std::pair<PureState, double> project(const PureState& psi, const Eigen::ArrayXd& element) {
    if ((element < -kHermTol).any() || (element > 1.0 + kHermTol).any())
        throw std::invalid_argument("project: POVM element outside [0, I]");
    Eigen::ArrayXd clamped = element.max(0.0);
    double prob = (clamped * psi.amplitudes().array().abs2()).sum();
    PureState out(psi.space(), (psi.amplitudes().array() * clamped.sqrt()).matrix());
    return {std::move(out), prob};
}

}  // namespace qcorr

#endif  // QCORR_FOCK_HPP
