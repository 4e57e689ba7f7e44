#include "offshell/integrator.hpp"

#include <cmath>
#include <exception>
#include <future>

namespace offshell {

Rkf45::Rkf45(Real abs_tol, Real rel_tol)
    : abs_tol_(std::move(abs_tol)), rel_tol_(std::move(rel_tol)) {
    for (auto& row : a_) row.fill(Real(0));
    a_[1][0] = ratio(1, 4);
    a_[2][0] = ratio(3, 32);
    a_[2][1] = ratio(9, 32);
    a_[3][0] = ratio(1932, 2197);
    a_[3][1] = ratio(-7200, 2197);
    a_[3][2] = ratio(7296, 2197);
    a_[4][0] = ratio(439, 216);
    a_[4][1] = Real(-8);
    a_[4][2] = ratio(3680, 513);
    a_[4][3] = ratio(-845, 4104);
    a_[5][0] = ratio(-8, 27);
    a_[5][1] = Real(2);
    a_[5][2] = ratio(-3544, 2565);
    a_[5][3] = ratio(1859, 4104);
    a_[5][4] = ratio(-11, 40);

    b4_ = {ratio(25, 216), Real(0), ratio(1408, 2565), ratio(2197, 4104), ratio(-1, 5), Real(0)};
    // b5 = (16/135, 0, 6656/12825, 28561/56430, -9/50, 2/55)
    e_ = {ratio(1, 360), Real(0), ratio(-128, 4275), ratio(-2197, 75240), ratio(1, 50),
          ratio(2, 55)};
}

std::string_view to_string(Form f) { return f == Form::scalar ? "scalar" : "vector"; }

std::string_view to_string(OutcomeKind k) {
    switch (k) {
    case OutcomeKind::converged_onshell: return "CONVERGED_ONSHELL";
    case OutcomeKind::diverged: return "DIVERGED";
    case OutcomeKind::tau_max_reached: return "TAU_MAX_REACHED";
    case OutcomeKind::step_collapse: return "STEP_COLLAPSE";
    }
    return "UNKNOWN";
}

namespace {

ModelParams params_at_working_precision(const ModelParams& p) {
    ModelParams q = p;
    q.D = at_working_precision(p.D);
    q.eps_floor = at_working_precision(p.eps_floor);
    q.eps_cap = at_working_precision(p.eps_cap);
    q.abs_tol = at_working_precision(p.abs_tol);
    q.rel_tol = at_working_precision(p.rel_tol);
    q.tau_max = at_working_precision(p.tau_max);
    q.h_min = at_working_precision(p.h_min);
    q.h_initial = at_working_precision(p.h_initial);
    return q;
}

struct ScalarForm {
    static constexpr std::size_t N = ScalarState::kSize;
    static constexpr Form form = Form::scalar;

    const ModelParams& p;

    static StateVector<N> pack(const ScalarState& s) {
        StateVector<N> y;
        const auto arr = s.to_array();
        for (std::size_t i = 0; i < N; ++i) y[i] = at_working_precision(arr[i]);
        return y;
    }

    StateVector<N> operator()(const StateVector<N>& y) const {
        return scalar_rhs(ScalarState::from_array(y), p);
    }

    static ScalarState scalars(const StateVector<N>& y) { return ScalarState::from_array(y); }
    static std::optional<WorldlineState> worldline(const StateVector<N>&) { return std::nullopt; }
};

struct VectorForm {
    // u, a, j, pos
    static constexpr std::size_t N = 16;
    static constexpr Form form = Form::vector;

    const ModelParams& p;

    static StateVector<N> pack(const WorldlineState& w) {
        StateVector<N> y;
        const FourVector pos = w.pos.value_or(FourVector{});
        for (int mu = 0; mu < 4; ++mu) {
            y[mu] = at_working_precision(w.u[mu]);
            y[4 + mu] = at_working_precision(w.a[mu]);
            y[8 + mu] = at_working_precision(w.j[mu]);
            y[12 + mu] = at_working_precision(pos[mu]);
        }
        return y;
    }

    static WorldlineState unpack(const StateVector<N>& y) {
        WorldlineState w;
        FourVector pos;
        for (int mu = 0; mu < 4; ++mu) {
            w.u[mu] = y[mu];
            w.a[mu] = y[4 + mu];
            w.j[mu] = y[8 + mu];
            pos[mu] = y[12 + mu];
        }
        w.pos = pos;
        return w;
    }

    StateVector<N> operator()(const StateVector<N>& y) const {
        const WorldlineState w = unpack(y);
        const FourVector snap = vector_rhs(w, p);
        StateVector<N> dy;
        for (int mu = 0; mu < 4; ++mu) {
            dy[mu] = w.a[mu];
            dy[4 + mu] = w.j[mu];
            dy[8 + mu] = snap[mu];
            dy[12 + mu] = w.u[mu];
        }
        return dy;
    }

    static ScalarState scalars(const StateVector<N>& y) { return scalars_of(unpack(y)); }
    static std::optional<WorldlineState> worldline(const StateVector<N>& y) { return unpack(y); }
};

template <class Model>
Sample make_sample(const Real& tau, const StateVector<Model::N>& y, const ModelParams& p,
                   const IntegrateOptions& opts) {
    Sample s;
    s.tau = tau;
    s.scalars = Model::scalars(y);
    s.worldline = Model::worldline(y);
    if (opts.record_k) s.k = k_potentials(s.scalars, p);
    if (opts.record_spectrum) s.spectrum = eigenvalues(jacobian(s.scalars, p));
    if (opts.record_velocity && s.worldline) s.velocity = three_velocity(s.worldline->u);
    return s;
}

Real growth_indicator(const ScalarState& s) { return std::max(s.eps, abs(s.deps)); }

bool converged(const ScalarState& s, const Real& floor) {
    return s.eps < floor && abs(s.deps) < floor && abs(s.ddeps) < floor && abs(s.rho) < floor &&
           abs(s.drho) < floor && abs(s.eta) < floor;
}

template <class Model, class Initial>
Trajectory drive(const Initial& initial, const ModelParams& params, const IntegrateOptions& opts) {
    params.validate();
    if (!(opts.record_every > 0)) throw ConfigError("record_every must be positive");
    if (opts.record_velocity && Model::form != Form::vector) {
        throw ConfigError("velocity output requires the vector form");
    }

    const ModelParams p = params_at_working_precision(params);
    const Model model{p};
    const Rkf45 stepper(p.abs_tol, p.rel_tol);
    const Real record_every = at_working_precision(opts.record_every);
    const Real growth = at_working_precision(opts.growth_sample_factor);

    StateVector<Model::N> y = Model::pack(initial);
    ScalarState current = Model::scalars(y);  // throws DomainError if eps <= 0
    if (!(current.eps > 0)) throw DomainError("integrate: initial eps must be positive");

    Trajectory traj;
    traj.form = Model::form;
    Real tau(0);
    traj.samples.push_back(make_sample<Model>(tau, y, p, opts));
    Real last_growth = growth_indicator(current);
    bool last_recorded = true;

    std::size_t grid_index = 1;
    Real next_record = record_every;
    Real h = std::min(p.h_initial, p.tau_max);

    while (true) {
        if (tau >= p.tau_max) {
            traj.outcome.kind = OutcomeKind::tau_max_reached;
            break;
        }
        // Land exactly on the output grid and on tau_max. A grid point within
        // h_min of tau_max is merged into it, otherwise the last leg would be
        // too short to take.
        const bool final_leg = !(p.tau_max - next_record >= p.h_min);
        const Real target = final_leg ? p.tau_max : next_record;
        bool hits_target = false;
        Real h_try = h;
        if (tau + h_try >= target) {
            h_try = target - tau;
            hits_target = true;
        }
        if (h_try < p.h_min) {
            traj.outcome.kind = OutcomeKind::step_collapse;
            break;
        }

        StepResult<Model::N> step;
        bool domain_fail = false;
        try {
            step = stepper.step(y, model, h_try);
        } catch (const DomainStepError&) {
            domain_fail = true;
        }
        ScalarState next;
        if (!domain_fail) {
            try {
                next = Model::scalars(step.state);
                domain_fail = !(next.eps > 0);
            } catch (const DomainError&) {
                domain_fail = true;
            }
        }
        if (domain_fail) {
            ++traj.rejected_steps;
            h = h_try / 2;
            continue;
        }
        if (!is_finite(step.error) || step.error > 1) {
            ++traj.rejected_steps;
            Real factor = is_finite(step.error)
                              ? ratio(9, 10) * pow(step.error, Real(-1) / 5)
                              : ratio(1, 5);
            factor = std::clamp(factor, ratio(1, 5), Real(1));
            h = h_try * factor;
            continue;
        }

        // Accepted.
        ++traj.accepted_steps;
        y = step.state;
        current = next;
        if (hits_target) {
            tau = target;
            if (!final_leg) {
                ++grid_index;
                next_record = record_every * static_cast<long>(grid_index);
            }
        } else {
            tau += h_try;
        }

        Real factor = step.error == 0 ? Real(5) : ratio(9, 10) * pow(step.error, Real(-1) / 5);
        factor = std::clamp(factor, ratio(1, 5), Real(5));
        // A step shortened to land on the grid does not shrink the proposal.
        const Real proposal = h_try * factor;
        h = (h_try < h) ? std::max(proposal, h) : proposal;

        const bool diverged = current.eps > p.eps_cap || current.deps > p.eps_cap;
        const bool onshell = converged(current, p.eps_floor);
        const Real g = growth_indicator(current);
        const bool on_grid = hits_target;
        const bool grew = g > 1 && g > last_growth * growth;

        if (on_grid || grew || diverged || onshell) {
            traj.samples.push_back(make_sample<Model>(tau, y, p, opts));
            last_growth = g;
            last_recorded = true;
        } else {
            last_recorded = false;
        }

        if (diverged) {
            traj.outcome.kind = OutcomeKind::diverged;
            traj.outcome.blowup_tau = tau;
            break;
        }
        if (onshell) {
            traj.outcome.kind = OutcomeKind::converged_onshell;
            break;
        }
    }

    if (!last_recorded) traj.samples.push_back(make_sample<Model>(tau, y, p, opts));
    traj.tau_end = tau;
    return traj;
}

}  // namespace

Trajectory integrate(const ScalarState& initial, const ModelParams& p,
                     const IntegrateOptions& opts) {
    return drive<ScalarForm>(initial, p, opts);
}

Trajectory integrate(const WorldlineState& initial, const ModelParams& p,
                     const IntegrateOptions& opts) {
    if (!(initial.u.t > 0)) throw DomainError("integrate: u.t must be positive");
    return drive<VectorForm>(initial, p, opts);
}

Real pole_time_estimate(const std::vector<Real>& tau, const std::vector<Real>& value) {
    if (tau.size() != value.size() || tau.empty()) {
        throw FitError("pole_time_estimate: need matching, non-empty series");
    }
    const Real final_value = value.back();
    if (!(final_value > 0)) throw FitError("pole_time_estimate: final value must be positive");

    // Last decade: walk back while the value stays within a factor of ten
    // of the final one.
    std::size_t first = value.size() - 1;
    while (first > 0 && value[first - 1] > 0 && value[first - 1] * 10 >= final_value) --first;
    const std::size_t n = value.size() - first;
    if (n < 4) {
        throw FitError("pole_time_estimate: fewer than 4 samples in the last decade of growth");
    }

    Real st(0), sy(0), stt(0), sty(0);
    const Real t0 = tau[first];
    for (std::size_t i = first; i < value.size(); ++i) {
        const Real t = tau[i] - t0;
        const Real inv = 1 / value[i];
        st += t;
        sy += inv;
        stt += t * t;
        sty += t * inv;
    }
    const Real count(static_cast<long>(n));
    const Real denom = count * stt - st * st;
    if (denom == 0) throw FitError("pole_time_estimate: degenerate fit window");
    const Real slope = (count * sty - st * sy) / denom;
    const Real intercept = (sy - slope * st) / count;
    if (!(slope < 0)) throw FitError("pole_time_estimate: 1/value is not decreasing");
    const Real root = t0 - intercept / slope;
    if (root < tau.back()) {
        throw FitError("pole_time_estimate: extrapolated pole precedes the last sample");
    }
    return root;
}

Real blowup_time_estimate(const Trajectory& traj) {
    if (traj.outcome.kind != OutcomeKind::diverged) {
        throw FitError("blowup_time_estimate: trajectory did not diverge");
    }
    std::vector<Real> tau;
    std::vector<Real> eps;
    std::vector<Real> deps;
    for (const auto& s : traj.samples) {
        tau.push_back(s.tau);
        eps.push_back(s.scalars.eps);
        deps.push_back(s.scalars.deps);
    }
    Real eps_min = eps.front();
    for (const auto& e : eps) eps_min = std::min(eps_min, e);
    if (eps.back() >= 10 * eps_min) return pole_time_estimate(tau, eps);
    return pole_time_estimate(tau, deps);
}

std::vector<SweepItem> sweep_D(const ScalarState& initial, const std::vector<Real>& d_values,
                               const ModelParams& p, const IntegrateOptions& opts) {
    for (const auto& d : d_values) {
        if (!(d > 0)) throw ConfigError("sweep_D: every D must be positive");
    }
    std::vector<std::future<SweepItem>> jobs;
    jobs.reserve(d_values.size());
    for (const auto& d : d_values) {
        jobs.push_back(std::async(std::launch::async, [&initial, &p, &opts, d]() {
            SweepItem item;
            item.D = d;
            ModelParams q = p;
            q.D = d;
            try {
                item.trajectory = integrate(initial, q, opts);
                item.outcome = item.trajectory->outcome;
            } catch (const std::exception& e) {
                item.outcome.kind = OutcomeKind::step_collapse;
                item.error = e.what();
            }
            return item;
        }));
    }
    std::vector<SweepItem> out;
    out.reserve(jobs.size());
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

}  // namespace offshell
