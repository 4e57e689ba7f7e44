#include "offshell/scenario.hpp"

#include "offshell/dynamics.hpp"
#include "offshell/errors.hpp"
#include "offshell/stability.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <sstream>

namespace offshell {

namespace {

using nlohmann::json;

Real real_from_json(const json& v, const std::string& what) {
    if (v.is_string()) {
        try {
            return parse_real(v.get<std::string>());
        } catch (const ConfigError&) {
            throw ConfigError(what + ": not a number: " + v.get<std::string>());
        }
    }
    if (v.is_number()) return parse_real(v.dump());
    throw ConfigError(what + ": expected a number or a decimal string");
}

FourVector four_from_json(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 4) throw ConfigError(what + ": expected [t, x, y, z]");
    return FourVector(real_from_json(v[0], what + "[0]"), real_from_json(v[1], what + "[1]"),
                      real_from_json(v[2], what + "[2]"), real_from_json(v[3], what + "[3]"));
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

ScalarState scalars_from_json(const json& init) {
    reject_unknown(init, {"eps", "deps", "ddeps", "rho", "drho", "eta"}, "initial");
    if (!init.contains("eps")) throw ConfigError("initial: eps is required");
    ScalarState s;
    s.eps = real_from_json(init["eps"], "initial.eps");
    auto opt = [&](const char* key, Real& dst) {
        if (init.contains(key)) dst = real_from_json(init[key], std::string("initial.") + key);
    };
    opt("deps", s.deps);
    opt("ddeps", s.ddeps);
    opt("rho", s.rho);
    opt("drho", s.drho);
    opt("eta", s.eta);
    if (!(s.eps > 0)) {
        throw ConfigError("initial.eps must be positive (state must lie above the mass shell)");
    }
    return s;
}

ModelParams params_from_json(const json& doc, int precision_bits) {
    ModelParams p;
    p.precision_bits = precision_bits;
    if (!doc.contains("params")) return p;
    const json& q = doc["params"];
    if (!q.is_object()) throw ConfigError("params: expected an object");
    reject_unknown(q, {"D", "eps_floor", "eps_cap", "abs_tol", "rel_tol", "tau_max", "h_min",
                       "h_initial"},
                   "params");
    auto opt = [&](const char* key, Real& dst) {
        if (q.contains(key)) dst = real_from_json(q[key], std::string("params.") + key);
    };
    opt("D", p.D);
    opt("eps_floor", p.eps_floor);
    opt("eps_cap", p.eps_cap);
    opt("abs_tol", p.abs_tol);
    opt("rel_tol", p.rel_tol);
    opt("tau_max", p.tau_max);
    opt("h_min", p.h_min);
    opt("h_initial", p.h_initial);
    return p;
}

std::string dec(const Real& x, int bits) { return to_decimal(x, csv_digits(bits)); }

json four_json(const FourVector& v, int bits) {
    return json::array({dec(v.t, bits), dec(v.x, bits), dec(v.y, bits), dec(v.z, bits)});
}

json scalars_json(const ScalarState& s, int bits) {
    return {{"eps", dec(s.eps, bits)},   {"deps", dec(s.deps, bits)},
            {"ddeps", dec(s.ddeps, bits)}, {"rho", dec(s.rho, bits)},
            {"drho", dec(s.drho, bits)}, {"eta", dec(s.eta, bits)}};
}

}  // namespace

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    try {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
}

int resolve_precision_bits(const nlohmann::json& doc, std::optional<int> flag) {
    int bits = kDefaultPrecisionBits;
    if (flag) {
        bits = *flag;
    } else if (const char* env = std::getenv(kPrecisionEnv); env && *env) {
        try {
            std::size_t used = 0;
            bits = std::stoi(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw ConfigError(std::string(kPrecisionEnv) + " is not an integer: " + env);
        }
    } else if (doc.contains("precision_bits")) {
        if (!doc["precision_bits"].is_number_integer()) {
            throw ConfigError("precision_bits must be an integer");
        }
        bits = doc["precision_bits"].get<int>();
    }
    if (bits < kMinPrecisionBits) throw ConfigError("precision_bits must be >= 53");
    return bits;
}

Scenario parse_scenario(const nlohmann::json& doc, std::optional<Form> form_override) {
    if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object");
    reject_unknown(doc, {"name", "form", "precision_bits", "initial", "params", "record_every",
                         "emit", "d_values", "description"},
                   "scenario");
    Scenario s;
    s.source = doc;

    if (!doc.contains("name") || !doc["name"].is_string() || doc["name"].get<std::string>().empty()) {
        throw ConfigError("scenario: name is required");
    }
    s.name = doc["name"].get<std::string>();
    if (s.name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("scenario: name must not contain path separators");
    }

    Form declared = Form::scalar;
    if (doc.contains("form")) {
        const std::string f = doc["form"].is_string() ? doc["form"].get<std::string>() : "";
        if (f == "scalar") declared = Form::scalar;
        else if (f == "vector") declared = Form::vector;
        else throw ConfigError("form must be \"scalar\" or \"vector\"");
    }
    s.form = form_override.value_or(declared);

    s.params = params_from_json(doc, requested_precision_bits());
    s.params.validate();

    if (doc.contains("record_every")) {
        s.record_every = real_from_json(doc["record_every"], "record_every");
    }
    if (!(s.record_every > 0)) throw ConfigError("record_every must be positive");

    if (!doc.contains("initial") || !doc["initial"].is_object()) {
        throw ConfigError("initial: expected an object");
    }
    const json& init = doc["initial"];
    const bool vector_data = init.contains("u");
    if (vector_data) {
        reject_unknown(init, {"u", "a", "j", "pos"}, "initial");
        WorldlineState w;
        w.u = four_from_json(init["u"], "initial.u");
        if (init.contains("a")) w.a = four_from_json(init["a"], "initial.a");
        if (init.contains("j")) w.j = four_from_json(init["j"], "initial.j");
        w.pos = init.contains("pos") ? four_from_json(init["pos"], "initial.pos") : FourVector{};
        if (!(w.u.t > 0)) throw ConfigError("initial.u: u.t must be positive");
        if (!(epsilon_of(w.u) > 0)) {
            throw ConfigError("initial.u: eps = -<u,u> - 1 must be positive (above the mass shell)");
        }
        s.scalar_initial = scalars_of(w);
        if (s.form == Form::vector) s.vector_initial = w;
    } else {
        s.scalar_initial = scalars_from_json(init);
        if (s.form == Form::vector) {
            try {
                s.vector_initial = worldline_from_scalars(s.scalar_initial);
            } catch (const DomainError& e) {
                throw ConfigError(std::string("initial: scalar data has no vector realization: ") +
                                  e.what());
            }
        }
    }

    if (doc.contains("emit")) {
        if (!doc["emit"].is_array()) throw ConfigError("emit: expected a list");
        s.emit = EmitSet{false, false, false, false};
        for (const auto& e : doc["emit"]) {
            const std::string name = e.is_string() ? e.get<std::string>() : "";
            if (name == "state") s.emit.state = true;
            else if (name == "k_potentials") s.emit.k_potentials = true;
            else if (name == "eigenvalues") s.emit.eigenvalues = true;
            else if (name == "velocity") s.emit.velocity = true;
            else throw ConfigError("emit: unknown output '" + name + "'");
        }
    }
    if (s.emit.velocity && s.form != Form::vector) {
        if (form_override && declared == Form::vector) {
            s.emit.velocity = false;  // converted run: no worldline to report
        } else {
            throw ConfigError("emit: velocity requires form \"vector\"");
        }
    }

    if (doc.contains("d_values")) {
        if (!doc["d_values"].is_array()) throw ConfigError("d_values: expected a list");
        for (const auto& d : doc["d_values"]) {
            Real v = real_from_json(d, "d_values");
            if (!(v > 0)) throw ConfigError("d_values: every D must be positive");
            s.d_values.push_back(v);
        }
    }
    return s;
}

std::vector<Real> parse_real_list(const std::string& text) {
    std::vector<Real> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("empty entry in list: " + text);
        out.push_back(parse_real(item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

RunReport run_scenario(const Scenario& s) {
    IntegrateOptions opts;
    opts.record_every = s.record_every;
    opts.record_k = s.emit.k_potentials;
    opts.record_spectrum = s.emit.eigenvalues;
    opts.record_velocity = s.emit.velocity;

    RunReport r;
    r.trajectory = s.form == Form::vector ? integrate(*s.vector_initial, s.params, opts)
                                          : integrate(s.scalar_initial, s.params, opts);
    if (r.trajectory.outcome.kind == OutcomeKind::diverged) {
        try {
            r.blowup_fit = blowup_time_estimate(r.trajectory);
        } catch (const FitError& e) {
            r.fit_note = e.what();
        }
    }
    return r;
}

int csv_digits(int precision_bits) { return std::max(precision_bits / 3, 15); }

std::vector<std::string> csv_header(const Scenario& s) {
    std::vector<std::string> h{"tau"};
    if (s.emit.state) {
        if (s.form == Form::vector) {
            for (const char* v : {"u", "a", "j", "x"}) {
                for (const char* c : {"t", "x", "y", "z"}) h.push_back(std::string(v) + "_" + c);
            }
        }
        for (const char* c : {"eps", "deps", "ddeps", "rho", "drho", "eta"}) h.push_back(c);
    }
    if (s.emit.k_potentials) {
        for (const char* c : {"k1", "k2", "k3"}) h.push_back(c);
    }
    if (s.emit.eigenvalues) {
        for (int i = 0; i < 6; ++i) h.push_back("re" + std::to_string(i));
        for (int i = 0; i < 6; ++i) h.push_back("im" + std::to_string(i));
    }
    if (s.emit.velocity) {
        for (const char* c : {"vx", "vy", "vz", "v"}) h.push_back(c);
    }
    return h;
}

void write_trajectory_csv(std::ostream& out, const Scenario& s, const Trajectory& traj) {
    const int digits = csv_digits(s.params.precision_bits);
    const auto header = csv_header(s);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';

    for (const auto& smp : traj.samples) {
        std::vector<const Real*> row{&smp.tau};
        if (s.emit.state) {
            if (s.form == Form::vector) {
                const WorldlineState& w = *smp.worldline;
                static const FourVector zero;
                for (const FourVector* v : {&w.u, &w.a, &w.j, w.pos ? &*w.pos : &zero}) {
                    for (int m = 0; m < 4; ++m) row.push_back(&(*v)[m]);
                }
            }
            const ScalarState& c = smp.scalars;
            for (const Real* v : {&c.eps, &c.deps, &c.ddeps, &c.rho, &c.drho, &c.eta}) {
                row.push_back(v);
            }
        }
        if (s.emit.k_potentials) {
            row.push_back(&smp.k->k1);
            row.push_back(&smp.k->k2);
            row.push_back(&smp.k->k3);
        }
        if (s.emit.eigenvalues) {
            for (int i = 0; i < 6; ++i) row.push_back(&smp.spectrum->values[i].re);
            for (int i = 0; i < 6; ++i) row.push_back(&smp.spectrum->values[i].im);
        }
        Real speed;
        if (s.emit.velocity) {
            row.push_back(&smp.velocity->vx);
            row.push_back(&smp.velocity->vy);
            row.push_back(&smp.velocity->vz);
            speed = smp.velocity->norm();
            row.push_back(&speed);
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << to_decimal(*row[i], digits);
        }
        out << '\n';
    }
}

nlohmann::json run_metadata(const Scenario& s, const RunReport& r) {
    const int bits = s.params.precision_bits;
    const Trajectory& t = r.trajectory;
    const ModelParams& p = s.params;

    json emit = json::array();
    if (s.emit.state) emit.push_back("state");
    if (s.emit.k_potentials) emit.push_back("k_potentials");
    if (s.emit.eigenvalues) emit.push_back("eigenvalues");
    if (s.emit.velocity) emit.push_back("velocity");

    json resolved = {
        {"name", s.name},
        {"form", std::string(to_string(s.form))},
        {"precision_bits", bits},
        {"record_every", dec(s.record_every, bits)},
        {"emit", emit},
        {"params",
         {{"D", dec(p.D, bits)},
          {"eps_floor", dec(p.eps_floor, bits)},
          {"eps_cap", dec(p.eps_cap, bits)},
          {"abs_tol", dec(p.abs_tol, bits)},
          {"rel_tol", dec(p.rel_tol, bits)},
          {"tau_max", dec(p.tau_max, bits)},
          {"h_min", dec(p.h_min, bits)},
          {"h_initial", dec(p.h_initial, bits)}}},
        {"initial_scalars", scalars_json(s.scalar_initial, bits)},
    };
    if (s.vector_initial) {
        resolved["initial_vector"] = {{"u", four_json(s.vector_initial->u, bits)},
                                      {"a", four_json(s.vector_initial->a, bits)},
                                      {"j", four_json(s.vector_initial->j, bits)}};
    }

    json meta = {
        {"library", "offshell"},
        {"version", kLibraryVersion},
        {"precision_bits", bits},
        {"scenario", resolved},
        {"source", s.source},
        {"outcome", std::string(to_string(t.outcome.kind))},
        {"blowup_tau", t.outcome.blowup_tau ? json(dec(*t.outcome.blowup_tau, bits)) : json()},
        {"blowup_tau_fit", r.blowup_fit ? json(dec(*r.blowup_fit, bits)) : json()},
        {"tau_end", dec(t.tau_end, bits)},
        {"accepted_steps", t.accepted_steps},
        {"rejected_steps", t.rejected_steps},
        {"samples", t.samples.size()},
        {"columns", csv_header(s)},
    };
    if (!r.fit_note.empty()) meta["blowup_fit_note"] = r.fit_note;
    if (!t.samples.empty()) meta["final_scalars"] = scalars_json(t.samples.back().scalars, bits);
    return meta;
}

void write_run_files(const std::filesystem::path& dir, const std::string& stem,
                     const Scenario& s, const RunReport& r) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream csv(dir / (stem + ".csv"));
        if (!csv) throw std::runtime_error("cannot write " + (dir / (stem + ".csv")).string());
        write_trajectory_csv(csv, s, r.trajectory);
    }
    std::ofstream meta(dir / (stem + ".meta.json"));
    if (!meta) throw std::runtime_error("cannot write " + (dir / (stem + ".meta.json")).string());
    meta << run_metadata(s, r).dump(2) << '\n';
}

int exit_status(OutcomeKind kind) {
    return kind == OutcomeKind::step_collapse ? kExitNumeric : kExitOk;
}

std::vector<SweepRow> run_sweep(const Scenario& s, const std::vector<Real>& d_values,
                                const std::filesystem::path& dir) {
    if (d_values.empty()) throw ConfigError("sweep: empty D list");
    for (const auto& d : d_values) {
        if (!(d > 0)) throw ConfigError("sweep: every D must be positive");
    }
    std::filesystem::create_directories(dir);

    std::vector<std::future<SweepRow>> jobs;
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&s, &dir, &d_values, i]() {
            Scenario one = s;
            one.params.D = d_values[i];
            SweepRow row;
            row.D = d_values[i];
            try {
                const RunReport r = run_scenario(one);
                write_run_files(dir, s.name + ".d" + std::to_string(i), one, r);
                row.outcome = r.trajectory.outcome.kind;
                row.blowup_tau = r.trajectory.outcome.blowup_tau;
                row.final_eps = r.trajectory.samples.back().scalars.eps;
                row.tau_end = r.trajectory.tau_end;
            } catch (const std::exception& e) {
                row.outcome = OutcomeKind::step_collapse;
                row.error = e.what();
            }
            return row;
        }));
    }
    std::vector<SweepRow> rows;
    for (auto& j : jobs) rows.push_back(j.get());

    const int bits = s.params.precision_bits;
    std::ofstream out(dir / (s.name + ".sweep.csv"));
    if (!out) throw std::runtime_error("cannot write sweep summary");
    out << "index,D,outcome,blowup_tau,final_eps,tau_end,file,error\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow& r = rows[i];
        std::string err = r.error;
        for (char& c : err) {
            if (c == ',' || c == '\n') c = ';';
        }
        out << i << ',' << dec(r.D, bits) << ',' << to_string(r.outcome) << ','
            << (r.blowup_tau ? dec(*r.blowup_tau, bits) : "") << ','
            << (r.error.empty() ? dec(r.final_eps, bits) : "") << ','
            << (r.error.empty() ? dec(r.tau_end, bits) : "") << ',' << s.name << ".d" << i
            << ".csv," << err << '\n';
    }
    return rows;
}

void write_k_grid_csv(std::ostream& out, const KGridSpec& spec, int precision_bits) {
    if (spec.eps_points < 2 || spec.deps_points < 2) {
        throw ConfigError("k-grid: need at least 2 points per axis");
    }
    if (!(spec.eps_min > 0) || !(spec.eps_max > spec.eps_min)) {
        throw ConfigError("k-grid: need 0 < eps_min < eps_max");
    }
    if (!(spec.deps_max > spec.deps_min)) throw ConfigError("k-grid: need deps_min < deps_max");
    if (!(spec.D > 0)) throw ConfigError("k-grid: D must be positive");

    ModelParams p;
    p.D = spec.D;
    const int digits = csv_digits(precision_bits);
    out << "eps,deps,ddeps,rho,k1,k2,k3,k1_plus,k2_plus,k3_plus\n";
    for (int i = 0; i < spec.eps_points; ++i) {
        const Real eps = spec.eps_min + (spec.eps_max - spec.eps_min) * i / (spec.eps_points - 1);
        for (int k = 0; k < spec.deps_points; ++k) {
            ScalarState s;
            s.eps = eps;
            s.deps = spec.deps_min + (spec.deps_max - spec.deps_min) * k / (spec.deps_points - 1);
            s.ddeps = spec.ddeps;
            s.rho = spec.rho;
            const KPotentials kp = k_potentials(s, p);
            const KPotentials pp = k_positive_part(kp);
            const std::array<const Real*, 10> row{&s.eps, &s.deps, &s.ddeps, &s.rho, &kp.k1,
                                                  &kp.k2,  &kp.k3,   &pp.k1,    &pp.k2, &pp.k3};
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << to_decimal(*row[c], digits);
            }
            out << '\n';
        }
    }
}

}  // namespace offshell
