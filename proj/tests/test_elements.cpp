#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcorr/elements.hpp"

using namespace qcorr;
using Catch::Approx;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("beam splitter convention") {
    auto space = FockSpace::create({"i", "j"}, 2);
    SECTION("50:50 on a single photon") {
        PureState out = apply_beam_splitter(PureState::basis_state(space, {1, 0}), 0.5, "i", "j");
        CHECK(std::real(out.amplitude({1, 0})) == Approx(1.0 / std::sqrt(2.0)));
        CHECK(std::real(out.amplitude({0, 1})) == Approx(1.0 / std::sqrt(2.0)));
    }
    SECTION("50:50 on |1,1> bunches (no coincidence)") {
        PureState out = apply_beam_splitter(PureState::basis_state(space, {1, 1}), 0.5, "i", "j");
        CHECK(std::real(out.amplitude({2, 0})) == Approx(1.0 / std::sqrt(2.0)));
        CHECK(std::real(out.amplitude({0, 2})) == Approx(-1.0 / std::sqrt(2.0)));
        CHECK(std::abs(out.amplitude({1, 1})) < 1e-12);
    }
    SECTION("T=1 is the identity up to the pinned phase on the second mode") {
        PureState a = apply_beam_splitter(PureState::basis_state(space, {1, 0}), 1.0, "i", "j");
        CHECK(std::real(a.amplitude({1, 0})) == Approx(1.0));
        PureState b = apply_beam_splitter(PureState::basis_state(space, {0, 1}), 1.0, "i", "j");
        CHECK(std::real(b.amplitude({0, 1})) == Approx(-1.0));
        // measurement statistics are untouched either way
        DensityOperator rho = DensityOperator::from_pure(PureState::basis_state(space, {0, 1}));
        DensityOperator rout = apply_beam_splitter(rho, 1.0, "i", "j");
        CHECK(max_abs_diff(rho.matrix(), rout.matrix()) < 1e-12);
    }
    SECTION("identical modes are rejected") {
        CHECK_THROWS_AS(apply_beam_splitter(PureState::vacuum(space), 0.5, "i", "i"), std::invalid_argument);
    }
}

TEST_CASE("half-wave plate") {
    auto space = FockSpace::create({"H", "V"}, 2);
    SECTION("pi/8 acts as a 50:50 splitter") {
        PureState out = apply_two_mode(PureState::basis_state(space, {1, 0}), half_wave_plate(M_PI / 8.0), "H", "V");
        CHECK(std::real(out.amplitude({1, 0})) == Approx(1.0 / std::sqrt(2.0)));
        CHECK(std::real(out.amplitude({0, 1})) == Approx(1.0 / std::sqrt(2.0)));
    }
    SECTION("theta=0 flips the sign of V") {
        PureState out = apply_two_mode(PureState::basis_state(space, {0, 1}), half_wave_plate(0.0), "H", "V");
        CHECK(std::real(out.amplitude({0, 1})) == Approx(-1.0));
    }
    SECTION("theta=pi/4 swaps H and V") {
        PureState out = apply_two_mode(PureState::basis_state(space, {0, 1}), half_wave_plate(M_PI / 4.0), "H", "V");
        CHECK(std::abs(out.amplitude({1, 0})) == Approx(1.0));
    }
}

TEST_CASE("quarter-wave plate") {
    auto space = FockSpace::create({"H", "V"}, 1);
    SECTION("is unitary for any angle") {
        for (double th : {0.0, 0.3, M_PI / 8, M_PI / 4, 1.1}) CHECK(is_unitary(quarter_wave_plate(th)));
    }
    SECTION("theta=0 applies the relative phase i to V") {
        PureState out = apply_two_mode(PureState::basis_state(space, {0, 1}), quarter_wave_plate(0.0), "H", "V");
        CHECK(std::real(out.amplitude({0, 1})) == Approx(0.0).margin(1e-12));
        CHECK(std::imag(out.amplitude({0, 1})) == Approx(1.0));
    }
    SECTION("theta=pi/4 splits a single photon evenly") {
        PureState out = apply_two_mode(PureState::basis_state(space, {1, 0}), quarter_wave_plate(M_PI / 4.0), "H", "V");
        CHECK(std::norm(out.amplitude({1, 0})) == Approx(0.5));
        CHECK(std::norm(out.amplitude({0, 1})) == Approx(0.5));
    }
}

TEST_CASE("pbs routing") {
    auto space = FockSpace::create({"Hin", "Vin", "Hout", "Vout"}, 2);
    SECTION("H input transmits") {
        PureState out = apply_pbs(PureState::basis_state(space, {1, 0, 0, 0}), "Hin", "Vin", "Hout", "Vout");
        CHECK(std::real(out.amplitude({0, 0, 1, 0})) == Approx(1.0));
    }
    SECTION("V input reflects with phase +1") {
        PureState out = apply_pbs(PureState::basis_state(space, {0, 1, 0, 0}), "Hin", "Vin", "Hout", "Vout");
        CHECK(std::real(out.amplitude({0, 0, 0, 1})) == Approx(1.0));
    }
    SECTION("vacuum is fixed") {
        PureState out = apply_pbs(PureState::vacuum(space), "Hin", "Vin", "Hout", "Vout");
        CHECK(std::real(out.amplitude({0, 0, 0, 0})) == Approx(1.0));
    }
    SECTION("label clash is rejected") {
        CHECK_THROWS_AS(apply_pbs(PureState::vacuum(space), "Hin", "Hin", "Hout", "Vout"), std::invalid_argument);
    }
}

TEST_CASE("loss channel") {
    auto space = FockSpace::create({"m"}, 4);
    SECTION("T=1 is the identity channel") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
        v(space->index_of({0})) = 0.6;
        v(space->index_of({1})) = 0.8;
        DensityOperator rho = DensityOperator::from_pure(PureState(space, v));
        DensityOperator out = apply_loss(rho, 1.0, "m");
        CHECK(max_abs_diff(rho.matrix(), out.matrix()) < 1e-12);
    }
    SECTION("qubit through loss matches the closed form entrywise") {
        // |beta|^2 (1-T)|0><0| + (alpha|0> + sqrt(T) beta |1>)(h.c.)
        double alpha = 0.6, beta = 0.8, T = 0.37;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
        v(space->index_of({0})) = alpha;
        v(space->index_of({1})) = beta;
        DensityOperator out = apply_loss(DensityOperator::from_pure(PureState(space, v)), T, "m");
        CHECK(std::real(out.element({0}, {0})) == Approx(beta * beta * (1 - T) + alpha * alpha).epsilon(1e-12));
        CHECK(std::real(out.element({1}, {1})) == Approx(T * beta * beta).epsilon(1e-12));
        CHECK(std::real(out.element({0}, {1})) == Approx(alpha * std::sqrt(T) * beta).epsilon(1e-12));
    }
    SECTION("T=0.5 on |1><1| gives diag(1/2, 1/2)") {
        DensityOperator out = apply_loss(DensityOperator::from_pure(PureState::basis_state(space, {1})), 0.5, "m");
        CHECK(std::real(out.element({0}, {0})) == Approx(0.5));
        CHECK(std::real(out.element({1}, {1})) == Approx(0.5));
    }
    SECTION("Kraus set is trace preserving") {
        LossChannel chan(0.42, "m");
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(space->dim(), space->dim());
        for (int k = 0; k <= space->nmax(); ++k) {
            Eigen::MatrixXcd K = Eigen::MatrixXcd(chan.kraus(space, k));
            sum += K.adjoint() * K;
        }
        CHECK(max_abs_diff(sum, Eigen::MatrixXcd::Identity(space->dim(), space->dim())) < 1e-10);
    }
    SECTION("semigroup: loss(T1) then loss(T2) equals loss(T1*T2)") {
        std::mt19937 rng(7);
        std::normal_distribution<double> gauss;
        Eigen::VectorXcd v(space->dim());
        for (int i = 0; i < space->dim(); ++i) v(i) = cd(gauss(rng), gauss(rng));
        v /= v.norm();
        DensityOperator rho = DensityOperator::from_pure(PureState(space, v));
        DensityOperator seq = apply_loss(apply_loss(rho, 0.7, "m"), 0.6, "m");
        DensityOperator direct = apply_loss(rho, 0.42, "m");
        CHECK(max_abs_diff(seq.matrix(), direct.matrix()) < 1e-10);
    }
    SECTION("loss equals a beam splitter into a traced environment") {
        double T = 0.3;
        auto wide = FockSpace::create({"m", "env"}, 3);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(wide->dim());
        v(wide->index_of({0, 0})) = 0.6;
        v(wide->index_of({2, 0})) = 0.8;
        PureState psi(wide, v);
        DensityOperator viaBs =
            partial_trace(DensityOperator::from_pure(apply_beam_splitter(psi, T, "m", "env")), {"m"});
        auto narrow = FockSpace::create({"m"}, 3);
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(narrow->dim());
        w(narrow->index_of({0})) = 0.6;
        w(narrow->index_of({2})) = 0.8;
        DensityOperator viaKraus = apply_loss(DensityOperator::from_pure(PureState(narrow, w)), T, "m");
        CHECK(max_abs_diff(viaBs.matrix(), viaKraus.matrix()) < 1e-10);
    }
    SECTION("pure-state branches reproduce the channel") {
        LossChannel chan(0.61, "m");
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space->dim());
        v(space->index_of({0})) = 0.5;
        v(space->index_of({2})) = std::sqrt(0.75);
        PureState psi(space, v);
        DensityOperator direct = chan.apply(DensityOperator::from_pure(psi));
        DensityOperator viaBranches = DensityOperator::zero(space);
        for (const auto& b : chan.branches(psi)) viaBranches.accumulate(b);
        CHECK(max_abs_diff(direct.matrix(), viaBranches.matrix()) < 1e-12);
    }
}

TEST_CASE("spdc state") {
    SECTION("p=0 is the vacuum") {
        PureState s = spdc_state(SourceSpec{0.0, 1.0}, "s", "i", 4);
        CHECK(std::abs(s.amplitude({0, 0})) == Approx(1.0));
    }
    SECTION("double-pair to single-pair amplitude ratio is sqrt(p)") {
        double p = 0.00123;
        PureState s = spdc_state(SourceSpec{p, 1.0}, "s", "i", 4);
        double ratio = std::abs(s.amplitude({2, 2})) / std::abs(s.amplitude({1, 1}));
        CHECK(ratio == Approx(std::sqrt(p)).epsilon(1e-12));
        CHECK(ratio == Approx(0.0351).margin(5e-5));
    }
    SECTION("single-pair probability is p(1-p) to first order") {
        double p = 0.00123;
        PureState s = spdc_state(SourceSpec{p, 1.0}, "s", "i", 4);
        double p1 = std::norm(s.amplitude({1, 1}));
        CHECK(p1 == Approx(p * (1.0 - p)).epsilon(1e-5));
    }
    SECTION("out-of-range p is rejected") {
        CHECK_THROWS_AS(spdc_state(SourceSpec{0.5, 1.0}, "s", "i", 4), std::invalid_argument);
    }
}

TEST_CASE("path-entangled preparation") {
    SECTION("ideal source gives (|10> + |01>)/sqrt(2)") {
        PureState s = prepare_path_entangled("f", "e");
        CHECK(std::real(s.amplitude({1, 0})) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
        CHECK(std::real(s.amplitude({0, 1})) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SECTION("real source carries a double-pair component of weight ~p") {
        double p = 0.00123;
        HeraldedState h = prepare_path_entangled("f", "e", SourceSpec{p, 1.0}, 1.0, 4);
        DensityOperator rho = h.state.normalized();
        double two_photon = 0.0;
        for (int i = 0; i < rho.space()->dim(); ++i)
            if (rho.space()->total(i) == 2) two_photon += std::real(rho.matrix()(i, i));
        CHECK(two_photon == Approx(p).epsilon(0.01));
    }
    SECTION("herald weight ~ eff * p for a low-gain source") {
        double p = 0.00123, eff = 0.8;
        HeraldedState h = prepare_path_entangled("f", "e", SourceSpec{p, 1.0}, eff, 4);
        CHECK(h.probability == Approx(eff * p).epsilon(0.01));
        CHECK(h.state.trace_weight() == Approx(h.probability).epsilon(1e-9));
    }
}

TEST_CASE("resource state") {
    SECTION("balanced at eta = 1/2") {
        PureState r = resource_state(0.5, "a", "v");
        CHECK(std::real(r.amplitude({1, 0})) == Approx(std::sqrt(0.5)));
        CHECK(std::real(r.amplitude({0, 1})) == Approx(std::sqrt(0.5)));
    }
    SECTION("eta = 0 puts the photon on v") {
        PureState r = resource_state(0.0, "a", "v");
        CHECK(std::abs(r.amplitude({0, 1})) == Approx(1.0));
    }
    SECTION("wave-plate calibration eta = sin(2 theta)") {
        CHECK(eta_from_hwp(M_PI / 12.0) == Approx(0.5).epsilon(1e-12));
        CHECK(eta_from_hwp(0.0) == Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("distinguishability split") {
    auto space = FockSpace::create({"m"}, 2);
    SECTION("xi = 1 leaves the photon in the matched sub-mode") {
        PureState s = distinguishability_split(PureState::basis_state(space, {1}), "m", 1.0, "m_u");
        CHECK(std::abs(s.amplitude({1, 0})) == Approx(1.0));
    }
    SECTION("xi = 0 moves the photon to the unmatched sub-mode") {
        PureState s = distinguishability_split(PureState::basis_state(space, {1}), "m", 0.0, "m_u");
        CHECK(std::abs(s.amplitude({0, 1})) == Approx(1.0));
    }
    SECTION("amplitudes are sqrt(xi), sqrt(1-xi)") {
        double xi = 0.97;
        PureState s = distinguishability_split(PureState::basis_state(space, {1}), "m", xi, "m_u");
        CHECK(std::norm(s.amplitude({1, 0})) == Approx(xi));
        CHECK(std::norm(s.amplitude({0, 1})) == Approx(1.0 - xi));
    }
}
