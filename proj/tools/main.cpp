#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "colehopf/burgers.hpp"
#include "colehopf/hopf.hpp"
#include "colehopf/linsolve.hpp"
#include "colehopf/ode.hpp"
#include "colehopf/verify.hpp"

using json = nlohmann::ordered_json;
using namespace colehopf;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitConfig = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

// ---------------------------------------------------------------------------
// flat INI config: [section] lines with key = value, '#'/';' comments

using IniMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

IniMap parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    IniMap out;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside any section");
        out[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

// a string-typed flag that remembers whether the command line set it, so
// config-file values can fill the gaps without overriding explicit flags
struct Setting {
    std::string value;
    CLI::Option* opt = nullptr;

    void fill_from(const IniMap& ini, const std::string& sec, const std::string& key) {
        if (opt && opt->count() > 0) return;
        auto s = ini.find(sec);
        if (s == ini.end()) return;
        auto k = s->second.find(key);
        if (k != s->second.end()) value = k->second;
    }
    bool empty() const { return value.empty(); }

    double as_double(const char* what) const {
        try {
            std::size_t pos = 0;
            double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": not a number: '" + value + "'");
        }
    }
    int as_int(const char* what) const {
        double v = as_double(what);
        int i = static_cast<int>(v);
        if (i != v) throw ConfigError(std::string(what) + ": not an integer: '" + value + "'");
        return i;
    }
};

ParamEnv parse_params(const std::vector<std::string>& kvs, const std::string& packed) {
    ParamEnv env;
    auto add = [&](const std::string& kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("bad parameter binding: '" + kv + "'");
        try {
            env[trim(kv.substr(0, eq))] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad parameter value in: '" + kv + "'");
        }
    };
    for (const auto& kv : kvs) add(kv);
    // config form: params = C=1, alpha=1
    std::size_t pos = 0;
    while (pos < packed.size()) {
        auto comma = packed.find(',', pos);
        std::string piece = trim(packed.substr(pos, comma - pos));
        if (!piece.empty()) add(piece);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return env;
}

// ---------------------------------------------------------------------------
// CSV + report output

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericError("cannot open output file: " + path);
    out << body;
    if (!out) throw NumericError("write failed: " + path);
}

std::string pde_csv(const LinearField& field, const TransformedField& tf) {
    std::string s = "x,t,phi,dphi,psi,mask\n";
    for (int l = 0; l < field.levels(); ++l)
        for (int i = 0; i < field.grid.n; ++i) {
            s += fmt17(field.grid.point(i)) + ',' + fmt17(field.times[l]) + ',' +
                 fmt17(field.phi[l][i]) + ',' + fmt17(field.dphi[l][i]) + ',' +
                 fmt17(tf.psi[l][i]) + ',' + std::to_string(int(tf.mask[l][i])) + '\n';
        }
    return s;
}

std::string ode_csv(const LinearField& field, const TransformedField& tf) {
    std::string s = "x,phi,dphi,psi,mask\n";
    for (int i = 0; i < field.grid.n; ++i)
        s += fmt17(field.grid.point(i)) + ',' + fmt17(field.phi[0][i]) + ',' +
             fmt17(field.dphi[0][i]) + ',' + fmt17(tf.psi[0][i]) + ',' +
             std::to_string(int(tf.mask[0][i])) + '\n';
    return s;
}

json report_of(const ResidualReport& rep) {
    json j;
    j["equation"] = equation_tag_name(rep.equation);
    j["stage"] = rep.stage;
    j["nx"] = rep.nx;
    j["nlevels"] = rep.nlevels;
    j["dx"] = rep.dx;
    j["linf"] = rep.linf;
    j["l2"] = rep.l2;
    j["masked_fraction"] = rep.masked_fraction;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    j["degenerate"] = rep.degenerate;
    j["notes"] = rep.notes;
    return j;
}

void emit_report(const Setting& path, const json& j) {
    if (!path.empty())
        write_file(path.value, j.dump(2) + "\n");
    else
        std::cout << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// derive / synth

int cmd_derive_burgers(const std::string& m_text, const std::string& h_text,
                       const ParamEnv& env, double x0, double x1) {
    Expr M = parse(m_text), H = parse(h_text);
    TransformPair pair = derive_transform(M, H, env, x0, x1);
    auto [W, V] = derive_coefficients(M, H);

    std::vector<double> grid(201);
    for (int i = 0; i < 201; ++i) grid[i] = x0 + (x1 - x0) * i / 200.0;
    auto residual = constraint_residual_m_h(M, H, env, grid);
    double cmax = 0.0;
    for (double r : residual) cmax = std::max(cmax, std::abs(r));
    bool ok = cmax <= kTolSym;

    std::cout << "Q = " << pair.Q.str() << "\n"
              << "P = " << pair.P.str() << "\n"
              << "W = " << W.str() << "\n"
              << "V = " << V.str() << "\n"
              << "constraint: " << (ok ? "pass" : "fail") << " (max |r| = " << fmt17(cmax)
              << ", tol = " << fmt17(kTolSym) << ")\n";
    return ok ? kExitPass : kExitVerifyFail;
}

int cmd_derive_ode(const std::string& f, const std::string& w, const std::string& v,
                   const std::string& s, const ParamEnv& env, double x0, double x1) {
    OdeProblem problem{parse(f), parse(w), parse(v), parse(s), std::nullopt, env, x0, x1};
    ForwardDerivation fwd = forward_derive(problem);
    double cmax = 0.0;
    for (double r : fwd.constraint) cmax = std::max(cmax, std::abs(r));

    std::cout << "Q = " << fwd.pair.Q.str() << "\n"
              << "P = " << fwd.pair.P.str() << "\n"
              << "U-equation: U' + (" << fwd.u_ode.g.str() << ")*U = " << fwd.u_ode.h.str()
              << "\n"
              << "constraint: " << (fwd.compatible ? "pass" : "fail") << " (max |r| = "
              << fmt17(cmax) << ", tol = " << fmt17(fwd.tol) << ")\n";
    return fwd.compatible ? kExitPass : kExitVerifyFail;
}

int cmd_synth_ode(const std::string& u, const std::string& p, const std::string& q,
                  const ParamEnv& env, double x0, double x1) {
    OdeProblem out = reverse_synthesize(parse(u), parse(p), parse(q), env, x0, x1);
    std::cout << "F = " << out.F.str() << "\n"
              << "W = " << out.W.str() << "\n"
              << "V = " << out.V.str() << "\n"
              << "S = " << out.S.str() << "\n";
    return kExitPass;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    Setting m, h, f, w, v, s;
    Setting phi0, dphi0, u0;
    Setting x0, x1, n;
    Setting t_end, nt, theta;
    Setting eps_pole, tol;
    Setting csv, residual_csv, report;
    std::vector<std::string> params;
    Setting packed_params;
    Setting config;

    void add_common(CLI::App* app) {
        x0.opt = app->add_option("--x0", x0.value, "left endpoint");
        x1.opt = app->add_option("--x1", x1.value, "right endpoint");
        n.opt = app->add_option("--n", n.value, "number of grid points");
        eps_pole.opt = app->add_option("--eps-pole", eps_pole.value,
                                       "relative pole-mask threshold");
        tol.opt = app->add_option("--tol", tol.value, "residual tolerance (Linf)");
        csv.opt = app->add_option("--csv", csv.value, "field CSV output path");
        residual_csv.opt = app->add_option("--residual-csv", residual_csv.value,
                                           "pointwise residual CSV output path");
        report.opt = app->add_option("--report", report.value,
                                     "JSON report path (stdout when omitted)");
        app->add_option("--param", params, "parameter binding name=value");
        config.opt = app->add_option("--config", config.value, "flat INI config file");
    }

    void merge_config() {
        if (config.empty()) return;
        IniMap ini = parse_ini(config.value);
        m.fill_from(ini, "problem", "m");
        h.fill_from(ini, "problem", "h");
        f.fill_from(ini, "problem", "f");
        w.fill_from(ini, "problem", "w");
        v.fill_from(ini, "problem", "v");
        s.fill_from(ini, "problem", "s");
        phi0.fill_from(ini, "problem", "phi0");
        dphi0.fill_from(ini, "problem", "dphi0");
        u0.fill_from(ini, "problem", "u0");
        packed_params.fill_from(ini, "problem", "params");
        x0.fill_from(ini, "grid", "x0");
        x1.fill_from(ini, "grid", "x1");
        n.fill_from(ini, "grid", "n");
        t_end.fill_from(ini, "time", "t_end");
        nt.fill_from(ini, "time", "nt");
        theta.fill_from(ini, "time", "theta");
        eps_pole.fill_from(ini, "solver", "eps_pole");
        tol.fill_from(ini, "solver", "tol");
        csv.fill_from(ini, "output", "csv");
        residual_csv.fill_from(ini, "output", "residual_csv");
        report.fill_from(ini, "output", "report");
    }
};

std::string pde_residual_csv(const BurgersProblem& prob, const TransformedField& tf) {
    const int n = tf.grid.n, nl = static_cast<int>(tf.psi.size());
    const double dx = tf.grid.dx();
    std::string out = "x,t,residual\n";
    for (int l = 1; l < nl - 1; ++l) {
        double dt2 = tf.times[l + 1] - tf.times[l - 1];
        for (int i = 2; i < n - 2; ++i) {
            if (tf.mask[l][i] || tf.mask[l - 1][i] || tf.mask[l + 1][i] || tf.mask[l][i - 1] ||
                tf.mask[l][i + 1])
                continue;
            double x = tf.grid.point(i);
            const auto& c = tf.psi[l];
            double pt = (tf.psi[l + 1][i] - tf.psi[l - 1][i]) / dt2;
            double px = (c[i + 1] - c[i - 1]) / (2.0 * dx);
            double pxx = (c[i + 1] - 2.0 * c[i] + c[i - 1]) / (dx * dx);
            double r = pt - prob.M(x, prob.env) * pxx - prob.H(x, prob.env) * c[i] * px -
                       prob.V(x, prob.env) * c[i] - prob.W(x, prob.env) * c[i] * c[i];
            out += fmt17(x) + ',' + fmt17(tf.times[l]) + ',' + fmt17(r) + '\n';
        }
    }
    return out;
}

std::string ode_residual_csv(const OdeProblem& prob, const TransformedField& tf) {
    const int n = tf.grid.n;
    const double dx = tf.grid.dx();
    std::string out = "x,residual\n";
    const auto& c = tf.psi[0];
    for (int i = 2; i < n - 2; ++i) {
        if (tf.mask[0][i] || tf.mask[0][i - 1] || tf.mask[0][i + 1]) continue;
        double x = tf.grid.point(i);
        double d1 = (c[i + 1] - c[i - 1]) / (2.0 * dx);
        double d2 = (c[i + 1] - 2.0 * c[i] + c[i - 1]) / (dx * dx);
        double r = d2 - prob.S(x, prob.env) -
                   (prob.V(x, prob.env) + prob.F(x, prob.env) * d1) * c[i] -
                   prob.W(x, prob.env) * c[i] * c[i];
        out += fmt17(x) + ',' + fmt17(r) + '\n';
    }
    return out;
}

int cmd_solve_burgers(SolveArgs& a) {
    a.merge_config();
    if (a.m.empty() || a.h.empty()) throw ConfigError("solve burgers: --m and --h are required");
    ParamEnv env = parse_params(a.params, a.packed_params.value);
    double x0 = a.x0.empty() ? 0.0 : a.x0.as_double("x0");
    double x1 = a.x1.empty() ? 1.0 : a.x1.as_double("x1");
    int n = a.n.empty() ? 257 : a.n.as_int("n");
    double t_end = a.t_end.empty() ? 0.1 : a.t_end.as_double("t_end");
    int nt = a.nt.empty() ? 500 : a.nt.as_int("nt");
    double theta = a.theta.empty() ? 0.5 : a.theta.as_double("theta");
    double eps_pole = a.eps_pole.empty() ? 1e-8 : a.eps_pole.as_double("eps_pole");
    double tol = a.tol.empty() ? 1e-3 : a.tol.as_double("tol");

    json j;
    j["command"] = "solve burgers";
    j["config"] = {{"m", a.m.value},       {"h", a.h.value}, {"x0", x0},   {"x1", x1},
                   {"n", n},               {"t_end", t_end}, {"nt", nt},   {"theta", theta},
                   {"eps_pole", eps_pole}, {"tol", tol}};
    for (const auto& [k, vv] : env) j["config"]["params"][k] = vv;

    Expr M = parse(a.m.value), H = parse(a.h.value);
    Grid1D grid(x0, x1, n);

    std::vector<double> cgrid(201);
    for (int i = 0; i < 201; ++i) cgrid[i] = x0 + (x1 - x0) * i / 200.0;
    auto cres = constraint_residual_m_h(M, H, env, cgrid);
    double cmax = 0.0;
    for (double r : cres) cmax = std::max(cmax, std::abs(r));
    j["constraint"] = {{"max_residual", cmax}, {"tolerance", kTolSym},
                       {"pass", cmax <= kTolSym}};
    if (cmax > kTolSym) {
        j["verdict"] = "incompatible";
        emit_report(a.report, j);
        return kExitVerifyFail;
    }

    TransformPair pair = derive_transform(M, H, env, x0, x1);
    BurgersProblem problem = make_burgers_problem(M, H, env, x0, x1);
    j["derived"] = {{"Q", pair.Q.str()},
                    {"P", pair.P.str()},
                    {"W", problem.W.str()},
                    {"V", problem.V.str()}};

    Expr ic = a.phi0.empty()
                  ? 1.0 + 0.5 * exp(-50.0 * pow(Expr::var() - 0.5 * (x0 + x1),
                                                Expr::constant(2.0)))
                  : parse(a.phi0.value);
    LinearField field = solve_heat(M, ic, grid, {}, t_end, nt, theta, env);
    TransformedField tf = apply_transform(pair, field, env, eps_pole);

    if (!a.csv.empty()) write_file(a.csv.value, pde_csv(field, tf));
    if (!a.residual_csv.empty()) write_file(a.residual_csv.value, pde_residual_csv(problem, tf));

    if (tf.degenerate) {
        j["verdict"] = "degenerate field";
        j["masked_fraction"] = tf.masked_fraction;
        emit_report(a.report, j);
        return kExitVerifyFail;
    }
    // skip the sharp-profile transient: residual over the later half
    ResidualReport rep = pde_residual(problem, tf, tol, field.levels() / 2, field.levels());
    j["residual"] = report_of(rep);
    j["verdict"] = rep.pass ? "pass" : "fail";
    emit_report(a.report, j);
    return rep.pass ? kExitPass : kExitVerifyFail;
}

int cmd_solve_ode(SolveArgs& a) {
    a.merge_config();
    if (a.f.empty() || a.w.empty() || a.v.empty() || a.s.empty())
        throw ConfigError("solve ode: --f, --w, --v, --s are required");
    ParamEnv env = parse_params(a.params, a.packed_params.value);
    double x0 = a.x0.empty() ? 0.0 : a.x0.as_double("x0");
    double x1 = a.x1.empty() ? 3.0 : a.x1.as_double("x1");
    int n = a.n.empty() ? 2001 : a.n.as_int("n");
    double u0 = a.u0.empty() ? 2.0 : a.u0.as_double("u0");
    double phi0 = a.phi0.empty() ? 1.0 : a.phi0.as_double("phi0");
    double dphi0 = a.dphi0.empty() ? 0.0 : a.dphi0.as_double("dphi0");
    double eps_pole = a.eps_pole.empty() ? 1e-8 : a.eps_pole.as_double("eps_pole");
    double tol = a.tol.empty() ? 1e-4 : a.tol.as_double("tol");

    json j;
    j["command"] = "solve ode";
    j["config"] = {{"f", a.f.value}, {"w", a.w.value},   {"v", a.v.value},
                   {"s", a.s.value}, {"x0", x0},         {"x1", x1},
                   {"n", n},         {"u0", u0},         {"phi0", phi0},
                   {"dphi0", dphi0}, {"eps_pole", eps_pole}, {"tol", tol}};
    for (const auto& [k, vv] : env) j["config"]["params"][k] = vv;

    OdeProblem problem{parse(a.f.value), parse(a.w.value), parse(a.v.value), parse(a.s.value),
                       std::nullopt, env, x0, x1};
    ForwardDerivation fwd = forward_derive(problem);
    double cmax = 0.0;
    for (double r : fwd.constraint) cmax = std::max(cmax, std::abs(r));
    j["constraint"] = {{"max_residual", cmax}, {"tolerance", fwd.tol},
                       {"pass", fwd.compatible}};
    if (!fwd.compatible) {
        j["verdict"] = "incompatible";
        emit_report(a.report, j);
        return kExitVerifyFail;
    }
    j["derived"] = {{"Q", fwd.pair.Q.str()},
                    {"P", fwd.pair.P.str()},
                    {"U_ode_g", fwd.u_ode.g.str()},
                    {"U_ode_h", fwd.u_ode.h.str()}};

    Grid1D grid(x0, x1, n);
    LinearPotential U = solve_u_ode(fwd.u_ode, u0, grid, env);
    LinearField field = solve_linear_ode2(U, phi0, dphi0, grid);
    TransformedField tf = apply_transform(fwd.pair, field, env, eps_pole);

    if (!a.csv.empty()) write_file(a.csv.value, ode_csv(field, tf));
    if (!a.residual_csv.empty()) write_file(a.residual_csv.value, ode_residual_csv(problem, tf));

    if (tf.degenerate) {
        j["verdict"] = "degenerate field";
        j["masked_fraction"] = tf.masked_fraction;
        emit_report(a.report, j);
        return kExitVerifyFail;
    }
    ResidualReport rep = ode_residual(problem, tf.psi[0], grid, tol, tf.mask[0]);
    rep.masked_fraction = tf.masked_fraction;
    j["residual"] = report_of(rep);
    j["verdict"] = rep.pass ? "pass" : "fail";
    emit_report(a.report, j);
    return rep.pass ? kExitPass : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// verify

ResidualReport run_case(const std::string& name) {
    if (name == "classical-burgers") {
        ParamEnv env{{"nu", 0.1}};
        Grid1D grid(0.0, 1.0, 257);
        return roundtrip_burgers(Expr::param("nu"), Expr::constant(-1.0), env, std::nullopt,
                                 grid, 0.1, 1000);
    }
    if (name == "exp-convection") {
        ParamEnv env{{"C", 1.0}, {"alpha", 1.0}};
        Grid1D grid(0.0, 1.0, 257);
        return roundtrip_burgers(Expr::constant(1.0), parse("C*exp(alpha*x)"), env,
                                 std::nullopt, grid, 0.1, 1000);
    }
    if (name == "bessel-ode") {
        ParamEnv env{{"a", 1.0}};
        Grid1D grid(0.0, 3.0, 12001);
        return roundtrip_ode(Expr::constant(1.0), Expr::param("a"), parse("4*a^2"),
                             Expr::constant(0.0), env, 2.0, 1.0, 0.0, grid, 1e-6);
    }
    throw ConfigError("unknown verify case: '" + name +
                      "' (bundled: classical-burgers, exp-convection, bessel-ode)");
}

ResidualReport run_config_case(const std::string& path) {
    IniMap ini = parse_ini(path);
    auto get = [&](const char* sec, const char* key) -> std::optional<std::string> {
        auto s = ini.find(sec);
        if (s == ini.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    };
    auto req = [&](const char* sec, const char* key) {
        auto v = get(sec, key);
        if (!v) throw ConfigError(std::string(path) + ": missing [" + sec + "] " + key);
        return *v;
    };
    auto num = [&](const char* sec, const char* key, double dflt) {
        auto v = get(sec, key);
        if (!v) return dflt;
        Setting s{*v};
        return s.as_double(key);
    };

    std::string kind = req("problem", "kind");
    ParamEnv env = parse_params({}, get("problem", "params").value_or(""));
    double x0 = num("grid", "x0", 0.0);
    double x1 = num("grid", "x1", kind == "ode" ? 3.0 : 1.0);
    int n = static_cast<int>(num("grid", "n", kind == "ode" ? 2001 : 257));
    Grid1D grid(x0, x1, n);

    if (kind == "burgers") {
        std::optional<Expr> ic;
        if (auto p = get("problem", "phi0")) ic = parse(*p);
        return roundtrip_burgers(parse(req("problem", "m")), parse(req("problem", "h")), env,
                                 ic, grid, num("time", "t_end", 0.1),
                                 static_cast<int>(num("time", "nt", 500)),
                                 num("time", "theta", 0.5), num("solver", "tol", 1e-3));
    }
    if (kind == "ode") {
        return roundtrip_ode(parse(req("problem", "f")), parse(req("problem", "w")),
                             parse(req("problem", "v")), parse(req("problem", "s")), env,
                             num("problem", "u0", 2.0), num("problem", "phi0", 1.0),
                             num("problem", "dphi0", 0.0), grid, num("solver", "tol", 1e-4));
    }
    throw ConfigError(path + ": [problem] kind must be 'burgers' or 'ode'");
}

int cmd_verify(const std::vector<std::string>& cases, const Setting& config,
               const Setting& report_path) {
    json j;
    j["command"] = "verify";
    j["cases"] = json::array();
    bool all_pass = true;
    if (!config.empty()) {
        ResidualReport rep = run_config_case(config.value);
        json c = report_of(rep);
        c["case"] = config.value;
        j["cases"].push_back(c);
        all_pass = all_pass && rep.pass;
    }
    for (const auto& name : cases) {
        ResidualReport rep = run_case(name);
        json c = report_of(rep);
        c["case"] = name;
        j["cases"].push_back(c);
        all_pass = all_pass && rep.pass;
    }
    if (j["cases"].empty()) throw ConfigError("verify: no case named and no --config given");
    j["verdict"] = all_pass ? "pass" : "fail";
    emit_report(report_path, j);
    return all_pass ? kExitPass : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// families

int cmd_families_h(const std::string& kind, const std::vector<std::string>& params,
                   double x0, double x1) {
    ParamEnv env = parse_params(params, "");
    HFamily fam;
    if (kind == "reciprocal-linear")
        fam = HFamily::ReciprocalLinear;
    else if (kind == "secant")
        fam = HFamily::Secant;
    else if (kind == "exponential")
        fam = HFamily::Exponential;
    else
        throw ConfigError("families h: unknown family '" + kind +
                          "' (reciprocal-linear, secant, exponential)");
    Expr H = h_family(fam, env);
    std::vector<double> grid(201);
    for (int i = 0; i < 201; ++i) grid[i] = x0 + (x1 - x0) * i / 200.0;
    auto res = h_ode_residual(H, env, grid);
    double rmax = 0.0;
    for (double r : res) rmax = std::max(rmax, std::abs(r));
    std::cout << "H = " << H.str() << "\n"
              << "H-equation max |r| = " << fmt17(rmax) << "\n";
    return rmax <= kTolSym ? kExitPass : kExitVerifyFail;
}

int cmd_families_m(bool have_linear, double a1, double b1, bool have_implicit, double c,
                   double c1, double c2, double x0, double x1, int n, const Setting& csv) {
    if (have_linear == have_implicit)
        throw ConfigError("families m: give either --a1/--b1 or --c/--c1/--c2");
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = x0 + (x1 - x0) * i / (n - 1);

    if (have_linear) {
        Expr M = m_family_linear_sq(a1, b1);
        auto res = m_ode_residual(M, {}, grid);
        double rmax = 0.0;
        for (double r : res) rmax = std::max(rmax, std::abs(r));
        std::cout << "M = " << M.str() << "\n"
                  << "M-equation max |r| = " << fmt17(rmax) << "\n"
                  << kMOdeCorrectionNote << "\n";
        return rmax <= kTolSym ? kExitPass : kExitVerifyFail;
    }

    ImplicitMFamily fam = m_family_implicit(c, c1, c2, grid);
    std::string body = "x,w,m\n";
    for (int i = 0; i < n; ++i)
        body += fmt17(grid[i]) + ',' + fmt17(fam.w[i]) + ',' + fmt17(fam.m[i]) + '\n';
    if (!csv.empty()) {
        write_file(csv.value, body);
        std::cout << "wrote " << n << " samples to " << csv.value << "\n";
    } else {
        std::cout << body;
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Cole-Hopf transform toolkit"};
    app.require_subcommand(1);

    // ---- derive
    auto* derive = app.add_subcommand("derive", "derive a transform pair from coefficients");
    derive->require_subcommand(1);
    std::string d_m, d_h, d_f = "1", d_w, d_v = "0", d_s = "0";
    std::vector<std::string> d_params;
    double d_x0 = 0.0, d_x1 = 1.0;

    auto* derive_b = derive->add_subcommand("burgers", "PDE side: from M and H");
    derive_b->set_help_flag("--help", "print help");  // frees -h for --h
    derive_b->add_option("--m", d_m, "diffusivity M(x)")->required();
    derive_b->add_option("--h", d_h, "convection coefficient H(x)")->required();
    derive_b->add_option("--param", d_params, "parameter binding name=value");
    derive_b->add_option("--x0", d_x0, "left endpoint");
    derive_b->add_option("--x1", d_x1, "right endpoint");

    auto* derive_o = derive->add_subcommand("ode", "ODE side: from F, W, V, S");
    derive_o->add_option("--f", d_f, "coefficient F(x)")->required();
    derive_o->add_option("--w", d_w, "coefficient W(x)")->required();
    derive_o->add_option("--v", d_v, "coefficient V(x)");
    derive_o->add_option("--s", d_s, "source S(x)");
    derive_o->add_option("--param", d_params, "parameter binding name=value");
    derive_o->add_option("--x0", d_x0, "left endpoint");
    derive_o->add_option("--x1", d_x1, "right endpoint");

    // ---- synth
    auto* synth = app.add_subcommand("synth", "synthesize a nonlinear problem");
    synth->require_subcommand(1);
    std::string sy_u, sy_p, sy_q;
    std::vector<std::string> sy_params;
    double sy_x0 = 0.0, sy_x1 = 1.0;
    auto* synth_o = synth->add_subcommand("ode", "from chosen U, P, Q");
    synth_o->add_option("--u", sy_u, "linear potential U(x)")->required();
    synth_o->add_option("--p", sy_p, "transform offset P(x)")->required();
    synth_o->add_option("--q", sy_q, "transform gain Q(x)")->required();
    synth_o->add_option("--param", sy_params, "parameter binding name=value");
    synth_o->add_option("--x0", sy_x0, "left endpoint");
    synth_o->add_option("--x1", sy_x1, "right endpoint");

    // ---- solve
    auto* solve = app.add_subcommand("solve", "solve the paired linear problem and transform");
    solve->require_subcommand(1);
    SolveArgs sb, so;
    auto* solve_b = solve->add_subcommand("burgers", "PDE side");
    solve_b->set_help_flag("--help", "print help");
    sb.m.opt = solve_b->add_option("--m", sb.m.value, "diffusivity M(x)");
    sb.h.opt = solve_b->add_option("--h", sb.h.value, "convection coefficient H(x)");
    sb.phi0.opt = solve_b->add_option("--phi0", sb.phi0.value, "initial profile phi(x, 0)");
    sb.t_end.opt = solve_b->add_option("--t-end", sb.t_end.value, "final time");
    sb.nt.opt = solve_b->add_option("--nt", sb.nt.value, "number of time steps");
    sb.theta.opt = solve_b->add_option("--theta", sb.theta.value, "time-stepping theta (0.5|1)");
    sb.add_common(solve_b);

    auto* solve_o = solve->add_subcommand("ode", "ODE side");
    so.f.opt = solve_o->add_option("--f", so.f.value, "coefficient F(x)");
    so.w.opt = solve_o->add_option("--w", so.w.value, "coefficient W(x)");
    so.v.opt = solve_o->add_option("--v", so.v.value, "coefficient V(x)");
    so.s.opt = solve_o->add_option("--s", so.s.value, "source S(x)");
    so.u0.opt = solve_o->add_option("--u0", so.u0.value, "initial value of U");
    so.phi0.opt = solve_o->add_option("--phi0", so.phi0.value, "phi at x0");
    so.dphi0.opt = solve_o->add_option("--dphi0", so.dphi0.value, "phi' at x0");
    so.add_common(solve_o);

    // ---- verify
    auto* verify = app.add_subcommand("verify", "run a named roundtrip case");
    std::vector<std::string> vf_cases;
    Setting vf_config, vf_report;
    verify->add_option("case", vf_cases,
                       "bundled case name (classical-burgers, exp-convection, bessel-ode)");
    vf_config.opt = verify->add_option("--config", vf_config.value, "case from an INI file");
    vf_report.opt = verify->add_option("--report", vf_report.value,
                                       "JSON report path (stdout when omitted)");

    // ---- families
    auto* families = app.add_subcommand("families", "closed-form coefficient families");
    families->require_subcommand(1);
    std::string fh_kind;
    std::vector<std::string> fh_params;
    double fh_x0 = 0.0, fh_x1 = 1.0;
    auto* fam_h = families->add_subcommand("h", "convection families for constant M");
    fam_h->add_option("--family", fh_kind, "reciprocal-linear | secant | exponential")
        ->required();
    fam_h->add_option("--param", fh_params, "parameter binding name=value");
    fam_h->add_option("--x0", fh_x0, "left endpoint");
    fam_h->add_option("--x1", fh_x1, "right endpoint");

    double fm_a1 = 0, fm_b1 = 0, fm_c = 0, fm_c1 = 0, fm_c2 = 0, fm_x0 = 0, fm_x1 = 1;
    int fm_n = 101;
    Setting fm_csv;
    auto* fam_m = families->add_subcommand("m", "diffusivity families for H = 1");
    auto* o_a1 = fam_m->add_option("--a1", fm_a1, "linear-square family: slope");
    fam_m->add_option("--b1", fm_b1, "linear-square family: offset");
    auto* o_c = fam_m->add_option("--c", fm_c, "implicit family: curvature constant");
    fam_m->add_option("--c1", fm_c1, "implicit family: first integration constant");
    fam_m->add_option("--c2", fm_c2, "implicit family: second integration constant");
    fam_m->add_option("--x0", fm_x0, "left endpoint");
    fam_m->add_option("--x1", fm_x1, "right endpoint");
    fam_m->add_option("--n", fm_n, "number of samples");
    fm_csv.opt = fam_m->add_option("--csv", fm_csv.value, "sample CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (derive_b->parsed())
            return cmd_derive_burgers(d_m, d_h, parse_params(d_params, ""), d_x0, d_x1);
        if (derive_o->parsed())
            return cmd_derive_ode(d_f, d_w, d_v, d_s, parse_params(d_params, ""), d_x0, d_x1);
        if (synth_o->parsed())
            return cmd_synth_ode(sy_u, sy_p, sy_q, parse_params(sy_params, ""), sy_x0, sy_x1);
        if (solve_b->parsed()) return cmd_solve_burgers(sb);
        if (solve_o->parsed()) return cmd_solve_ode(so);
        if (verify->parsed()) return cmd_verify(vf_cases, vf_config, vf_report);
        if (fam_h->parsed()) return cmd_families_h(fh_kind, fh_params, fh_x0, fh_x1);
        if (fam_m->parsed())
            return cmd_families_m(o_a1->count() > 0, fm_a1, fm_b1, o_c->count() > 0, fm_c,
                                  fm_c1, fm_c2, fm_x0, fm_x1, fm_n, fm_csv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "expression parse error at offset " << e.offset << ": " << e.what() << "\n";
        return kExitConfig;
    } catch (const EvalError& e) {
        std::cerr << "evaluation error in '" << e.subexpr << "': " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
