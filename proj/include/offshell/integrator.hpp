#pragma once

// Adaptive Runge-Kutta-Fehlberg 4(5) integration of either formulation, with
// halting events for the mass shell, finite-time blow-up and step collapse.

#include "offshell/core.hpp"
#include "offshell/dynamics.hpp"
#include "offshell/errors.hpp"
#include "offshell/stability.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace offshell {

// ===========================================================================
// Embedded Fehlberg pair
// ===========================================================================

template <std::size_t N>
using StateVector = std::array<Real, N>;

template <std::size_t N>
struct StepResult {
    StateVector<N> state;  ///< fourth-order solution
    Real error{0};         ///< max_i |y5_i - y4_i| / (abs_tol + rel_tol * |y_i|)
};

/// Fehlberg 4(5) tableau held as exact rationals rounded once at the
/// working precision of construction.
class Rkf45 {
public:
    Rkf45(Real abs_tol, Real rel_tol);

    /// One step of size h. `rhs(const StateVector<N>&) -> StateVector<N>`
    /// may throw DomainError at a stage point; that is reported as
    /// DomainStepError so the caller can shrink h.
    template <std::size_t N, class Rhs>
    StepResult<N> step(const StateVector<N>& y, Rhs&& rhs, const Real& h) const;

private:
    Real abs_tol_;
    Real rel_tol_;
    // a[i][j]: stage coupling, b4: propagated weights, e: b5 - b4.
    std::array<std::array<Real, 5>, 6> a_{};
    std::array<Real, 6> b4_{};
    std::array<Real, 6> e_{};
};

template <std::size_t N, class Rhs>
StepResult<N> step_rk45(const StateVector<N>& y, Rhs&& rhs, const Real& h, const Real& abs_tol,
                        const Real& rel_tol) {
    return Rkf45(abs_tol, rel_tol).step(y, std::forward<Rhs>(rhs), h);
}

template <std::size_t N, class Rhs>
StepResult<N> Rkf45::step(const StateVector<N>& y, Rhs&& rhs, const Real& h) const {
    std::array<StateVector<N>, 6> k;
    StateVector<N> stage;
    try {
        for (int s = 0; s < 6; ++s) {
            for (std::size_t i = 0; i < N; ++i) {
                Real acc(0);
                for (int j = 0; j < s; ++j) acc += a_[s][j] * k[j][i];
                stage[i] = y[i] + h * acc;
            }
            k[s] = rhs(stage);
        }
    } catch (const DomainStepError&) {
        throw;
    } catch (const DomainError& e) {
        throw DomainStepError(e.what());
    }

    StepResult<N> out;
    for (std::size_t i = 0; i < N; ++i) {
        Real inc(0);
        Real err(0);
        for (int s = 0; s < 6; ++s) {
            inc += b4_[s] * k[s][i];
            err += e_[s] * k[s][i];
        }
        out.state[i] = y[i] + h * inc;
        const Real scale = abs_tol_ + rel_tol_ * std::max(abs(y[i]), abs(out.state[i]));
        out.error = std::max(out.error, abs(h * err) / scale);
    }
    return out;
}

// ===========================================================================
// Trajectories
// ===========================================================================

enum class Form { scalar, vector };

enum class OutcomeKind { converged_onshell, diverged, tau_max_reached, step_collapse };

std::string_view to_string(Form f);
std::string_view to_string(OutcomeKind k);

struct Outcome {
    OutcomeKind kind{OutcomeKind::tau_max_reached};
    /// Present iff kind == diverged: tau at which the blow-up cap was crossed.
    std::optional<Real> blowup_tau;
};

struct Sample {
    Real tau{0};
    ScalarState scalars;
    std::optional<WorldlineState> worldline;
    std::optional<KPotentials> k;
    std::optional<EigenSpectrum> spectrum;
    std::optional<ThreeVelocity> velocity;
};

struct Trajectory {
    Form form{Form::scalar};
    std::vector<Sample> samples;
    Outcome outcome;
    Real tau_end{0};
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

struct IntegrateOptions {
    Real record_every{"0.01"};
    bool record_k = true;
    bool record_spectrum = false;
    bool record_velocity = false;
    /// Extra samples are taken whenever max(eps, |eps'|) has grown by this
    /// factor since the previous sample (only above 1), so a blow-up is
    /// resolved down to the cap.
    Real growth_sample_factor{"1.2589254117941673"};
};

/// Integrates the scalar system from `initial`.
///
/// Halts with
///   converged_onshell  eps < eps_floor and |eps'|, |eps''|, |rho|, |rho'|, |eta| < eps_floor
///   diverged           eps > eps_cap or eps' > eps_cap (blowup_tau = tau)
///   step_collapse      the step size fell below h_min
///   tau_max_reached    otherwise
/// Throws ConfigError for invalid params, DomainError for an invalid initial
/// state.
Trajectory integrate(const ScalarState& initial, const ModelParams& p,
                     const IntegrateOptions& opts = {});

/// Vector-form counterpart: integrates (u, a, j) with x'''' from vector_rhs
/// and the position alongside. Halting tests use scalars_of of the state.
Trajectory integrate(const WorldlineState& initial, const ModelParams& p,
                     const IntegrateOptions& opts = {});

/// Pole extrapolation: fits 1/v(tau) linearly over the last recorded decade
/// of growth of v and returns the root. v is eps when eps grew by at least a
/// decade along the run, otherwise eps' (eps itself grows only slowly into a
/// blow-up of its rate). Throws FitError with fewer than 4 points in the
/// window or when the root precedes the last sample.
Real blowup_time_estimate(const Trajectory& traj);

/// Same fit on raw (tau, value) data with value > 0 growing towards a pole.
Real pole_time_estimate(const std::vector<Real>& tau, const std::vector<Real>& value);

struct SweepItem {
    Real D{0};
    Outcome outcome;
    std::optional<Trajectory> trajectory;
    /// Non-empty when the run raised an error instead of finishing.
    std::string error;
};

/// Independent integrations per D (in parallel), results in input order.
std::vector<SweepItem> sweep_D(const ScalarState& initial, const std::vector<Real>& d_values,
                               const ModelParams& p, const IntegrateOptions& opts = {});

}  // namespace offshell
