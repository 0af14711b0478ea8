#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ioncav/propagators.hpp"

using namespace ioncav;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Random normalized state supported strictly below both cutoffs, so every
// case pulse stays clear of the truncation guard.
PureState random_safe_state(const SystemConfig& config, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    PureState state{config, Vector::Zero(config.dimension())};
    for (int i = 0; i < config.dimension(); ++i) {
        const BasisLabel label = basis_label(config, i);
        if (label.photon >= config.photon_cutoff) continue;
        bool interior = true;
        for (int value : label.phonon) interior = interior && value < config.phonon_cutoff;
        if (!interior) continue;
        state.amplitudes[i] = Complex(gauss(rng), gauss(rng));
    }
    state.amplitudes.normalize();
    return state;
}

double max_diff(const PureState& x, const PureState& y) {
    return (x.amplitudes - y.amplitudes).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("coupling rates") {
    PhysicalParams params = default_params();

    SUBCASE("case 4 rate from g, eta_c, phi") {
        const double expected = params.eta_c * params.g * std::cos(params.phi);
        CHECK(coupling_rate(4, params) == doctest::Approx(expected).epsilon(1e-14));
        CHECK(coupling_rate(4, params) == doctest::Approx(2.665e7).epsilon(1e-3));
    }
    SUBCASE("standing-wave node and antinode") {
        params.phi = 0.0;
        CHECK(coupling_rate(7, params) == doctest::Approx(0.0));
        params.phi = kPi / 2.0;
        CHECK(std::abs(coupling_rate(4, params)) <= 1e-15 * params.g); // cos(pi/2) roundoff
    }
    SUBCASE("case grouping") {
        CHECK(coupling_rate(1, params) == params.G);
        CHECK(coupling_rate(2, params) == coupling_rate(3, params));
        CHECK(coupling_rate(2, params) == doctest::Approx(params.G * params.eta_L));
        CHECK(coupling_rate(5, params) == coupling_rate(4, params));
        CHECK(coupling_rate(6, params) == coupling_rate(4, params));
    }
    SUBCASE("invalid case") {
        CHECK_THROWS_AS(coupling_rate(0, params), std::domain_error);
        CHECK_THROWS_AS(coupling_rate(8, params), std::domain_error);
    }
}

TEST_CASE("case Hamiltonians are Hermitian and match the listed operators") {
    const SystemConfig config = make_config(1, 2, 2);
    const PhysicalParams params = default_params();

    for (int case_id = 1; case_id <= 7; ++case_id) {
        const Matrix h = case_hamiltonian(config, params, case_id, 0);
        CAPTURE(case_id);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * h.cwiseAbs().maxCoeff());
    }

    SUBCASE("case 2 red-sideband element <e,0|H|g,1> = iW") {
        const Matrix h = case_hamiltonian(config, params, 2, 0);
        const double w = params.G * params.eta_L;
        const int from = basis_index(config, make_label({0}, {1}, 0));
        const int to = basis_index(config, make_label({1}, {0}, 0));
        CHECK(std::abs(h(to, from) - kI * w) <= 1e-9);
    }
    SUBCASE("case 7 takes |e, photon 0> to Omega' |g, photon 1>") {
        const Matrix h = case_hamiltonian(config, params, 7, 0);
        const PureState excited = basis_state(config, make_label({1}, {0}, 0));
        const PureState image = apply_operator(h, excited);
        const int target = basis_index(config, make_label({0}, {0}, 1));
        CHECK(std::abs(image.amplitudes[target] - derived_couplings(params).Omega_prime) <= 1e-6);
        CHECK(image.amplitudes.norm() ==
              doctest::Approx(derived_couplings(params).Omega_prime));
    }
}

TEST_CASE("closed-form propagator reproduces the printed evolutions") {
    const SystemConfig config = make_config(1, 3, 3);

    SUBCASE("case 4 at theta = pi/2: |g,1,1> -> -i |e,0,0>") {
        const PureState in = basis_state(config, make_label({0}, {1}, 1));
        const PureState out = analytic_propagate(in, {4, 0, kPi / 2});
        const int target = basis_index(config, make_label({1}, {0}, 0));
        CHECK(std::abs(out.amplitudes[target] - (-kI)) <= 1e-12);
        CHECK(std::abs(out.norm() - 1.0) <= 1e-12);
    }
    SUBCASE("theta = 0 is the identity for every case") {
        std::mt19937_64 rng(7);
        const PureState state = random_safe_state(config, rng);
        for (int case_id = 1; case_id <= 7; ++case_id) {
            CAPTURE(case_id);
            CHECK(max_diff(analytic_propagate(state, {case_id, 0, 0.0}), state) == 0.0);
        }
    }
    SUBCASE("case 3 blue sideband at theta = pi/2: |g,0>_b -> |e,1>_b") {
        const PureState in = basis_state(config, make_label({0}, {0}, 0));
        const PureState out = analytic_propagate(in, {3, 0, kPi / 2});
        const int target = basis_index(config, make_label({1}, {1}, 0));
        CHECK(std::abs(out.amplitudes[target] - 1.0) <= 1e-12);
        CHECK(max_diff(out, expm_propagate(in, {3, 0, kPi / 2})) <= 1e-9);
    }
    SUBCASE("case 2 signs: |e,0>_b -> -|g,1>_b at theta = pi/2") {
        const PureState in = basis_state(config, make_label({1}, {0}, 0));
        const PureState out = analytic_propagate(in, {2, 0, kPi / 2});
        const int target = basis_index(config, make_label({0}, {1}, 0));
        CHECK(std::abs(out.amplitudes[target] - (-1.0)) <= 1e-12);
    }
}

TEST_CASE("matrix-exponential oracle") {
    const SystemConfig config = make_config(1, 2, 2);

    SUBCASE("case 1 at theta = pi flips the sign of |g>") {
        const PureState in = basis_state(config, make_label({0}, {0}, 0));
        const PureState out = expm_propagate(in, {1, 0, kPi});
        CHECK(std::abs(out.amplitudes[basis_index(config, make_label({0}, {0}, 0))] - (-1.0)) <=
              1e-12);
    }
    SUBCASE("theta = 0 is the identity") {
        const PureState in = basis_state(config, make_label({1}, {1}, 1));
        CHECK(max_diff(expm_propagate(in, {5, 0, 0.0}), in) <= 1e-14);
    }
}

TEST_CASE("oracle equivalence, unitarity, composition over randomized trials") {
    std::mt19937_64 rng(20260808);
    std::uniform_real_distribution<double> angle(0.0, 4.0 * kPi);

    const SystemConfig one_trap = make_config(1, 3, 3);
    const SystemConfig two_trap = make_config(2, 2, 2);

    int trials = 0;
    double worst_oracle = 0.0, worst_norm = 0.0, worst_composition = 0.0;
    for (int round = 0; round < 10; ++round) {
        for (int case_id = 1; case_id <= 7; ++case_id) {
            const bool two = round % 2 == 1;
            const SystemConfig& config = two ? two_trap : one_trap;
            const int trap = two ? static_cast<int>(rng() % 2) : 0;
            const PureState state = random_safe_state(config, rng);
            const double theta = angle(rng);
            const Pulse pulse{case_id, trap, theta};

            const PureState fast = analytic_propagate(state, pulse);
            const PureState oracle = expm_propagate(state, pulse);
            worst_oracle = std::max(worst_oracle, max_diff(fast, oracle));
            worst_norm = std::max(worst_norm, std::abs(fast.norm() - state.norm()));

            const double theta1 = 0.3 * theta, theta2 = 0.7 * theta;
            const PureState split = analytic_propagate(
                analytic_propagate(state, {case_id, trap, theta1}), {case_id, trap, theta2});
            worst_composition = std::max(worst_composition, max_diff(split, fast));
            ++trials;
        }
    }
    CHECK(trials >= 70);
    CHECK(worst_oracle <= 1e-9);
    CHECK(worst_norm <= 1e-12);
    CHECK(worst_composition <= 1e-10);
}

TEST_CASE("case 4 conserves the joint photon-phonon excitation pattern") {
    const SystemConfig config = make_config(1, 2, 2);
    const Pulse pulse{4, 0, 1.234};
    for (int i = 0; i < config.dimension(); ++i) {
        PureState in{config, Vector::Zero(config.dimension())};
        in.amplitudes[i] = 1.0;
        const BasisLabel from = basis_label(config, i);
        PureState out{config, Vector()};
        try {
            out = analytic_propagate(in, pulse);
        } catch (const TruncationError&) {
            continue; // boundary states are exercised in the guard test
        }
        for (int j = 0; j < config.dimension(); ++j) {
            if (std::abs(out.amplitudes[j]) <= 1e-14) continue;
            if (j == i) continue;
            const BasisLabel to = basis_label(config, j);
            // Every jump moves photon and phonon together and flips the ion.
            const int dm = to.photon - from.photon;
            const int dn = to.phonon[0] - from.phonon[0];
            const bool excites = to.internal_state[0] == 1 && from.internal_state[0] == 0;
            const bool deexcites = to.internal_state[0] == 0 && from.internal_state[0] == 1;
            CHECK(dm == dn);
            CHECK(std::abs(dm) == 1);
            CHECK((excites || deexcites));
            CHECK(dm == (excites ? -1 : 1));
        }
    }
}

TEST_CASE("truncation guard refuses pulses that would leak population") {
    const SystemConfig config = make_config(1, 2, 2);

    SUBCASE("case 4 from the top corner") {
        const PureState top = basis_state(config, make_label({1}, {2}, 2));
        CHECK_THROWS_AS(analytic_propagate(top, {4, 0, 0.5}), TruncationError);
        CHECK_NOTHROW(analytic_propagate(top, {4, 0, 0.0}));
    }
    SUBCASE("case 7 from the top photon level") {
        const PureState top = basis_state(config, make_label({1}, {0}, 2));
        CHECK_THROWS_AS(analytic_propagate(top, {7, 0, 1.0}), TruncationError);
    }
    SUBCASE("case 3 from the top phonon level on the ground side") {
        const PureState top = basis_state(config, make_label({0}, {2}, 0));
        CHECK_THROWS_AS(analytic_propagate(top, {3, 0, 1.0}), TruncationError);
    }
    SUBCASE("population at the threshold is tolerated and frozen like the oracle") {
        PureState state = basis_state(config, make_label({0}, {0}, 0));
        state.amplitudes[basis_index(config, make_label({1}, {0}, 2))] = 1e-6;
        state.amplitudes.normalize();
        // 1e-12 of population sits on the risky level, under the 1e-10 gate.
        const Pulse pulse{7, 0, 2.5};
        PureState fast{config, Vector()};
        CHECK_NOTHROW(fast = analytic_propagate(state, pulse));
        CHECK(max_diff(fast, expm_propagate(state, pulse)) <= 1e-12);
    }
}

TEST_CASE("pulse validation") {
    const SystemConfig config = make_config(1, 2, 2);
    const PureState state = basis_state(config, make_label({0}, {0}, 0));
    CHECK_THROWS_AS(analytic_propagate(state, {9, 0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(analytic_propagate(state, {2, 1, 1.0}), std::out_of_range);
    CHECK_THROWS_AS(analytic_propagate(state, {2, 0, -1.0}), std::invalid_argument);
}
