// lsk: batch front end for family sampling, support conversions, curvature
// grids, geodesic traces, criterion verdicts, and the verification suite.
//
// Exit codes: 0 ok, 1 suite failure, 2 configuration error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsk/criteria.hpp"
#include "lsk/curvature.hpp"
#include "lsk/families.hpp"
#include "lsk/geodesics.hpp"
#include "lsk/numerics.hpp"
#include "lsk/support.hpp"
#include "lsk/verify.hpp"

using namespace lsk;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Range {
    double a = 0, b = 1;
    int n = 2;
    bool log = false;

    std::vector<double> points() const {
        if (n < 1) throw ConfigError("range: empty grid");
        std::vector<double> v(n);
        if (n == 1) {
            v[0] = a;
            return v;
        }
        for (int i = 0; i < n; ++i)
            v[i] = log ? a * std::pow(b / a, double(i) / (n - 1))
                       : a + (b - a) * i / (n - 1);
        return v;
    }
};

// "a:b:N" linear or "a:b:logN" log-spaced
Range parse_range(const std::string& s) {
    Range r;
    const auto p1 = s.find(':'), p2 = s.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw ConfigError("range syntax is a:b:N or a:b:logN: " + s);
    r.a = std::stod(s.substr(0, p1));
    r.b = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
    std::string cnt = s.substr(p2 + 1);
    if (cnt.rfind("log", 0) == 0) {
        r.log = true;
        cnt = cnt.substr(3);
        if (r.a <= 0 || r.b <= 0)
            throw ConfigError("log range needs positive endpoints: " + s);
    }
    r.n = std::stoi(cnt);
    if (r.n < 1) throw ConfigError("range: grid must be non-empty");
    return r;
}

// phi specs: constant:<v>, semitrough, hyperboloid, glide:<lambda>,
// parabolic:<eps>, holder:<eps>,<alpha>, wedge, csv:<path>
NullSupportFn parse_phi(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg =
        colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "constant") {
        const double c = arg.empty() ? 0.0 : std::stod(arg);
        return NullSupportFn::closed_form("constant",
                                          [c](double) { return ExtReal(c); });
    }
    if (kind == "semitrough") return family_support(Semitrough{});
    if (kind == "hyperboloid") return family_support(Hyperboloid{});
    if (kind == "glide")
        return family_support(Glide{arg.empty() ? 1.0 : std::stod(arg)});
    if (kind == "parabolic")
        return family_support(ParabolicInvariant{arg.empty() ? 0.5 : std::stod(arg)});
    if (kind == "wedge") return family_support(CuspComparison{1.0});
    if (kind == "csv") {
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot open " + arg);
        std::stringstream ss;
        ss << in.rdbuf();
        return support_from_csv(ss.str());
    }
    throw ConfigError("unknown phi spec: " + spec);
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output " + path);
    out << content;
}

struct CommonOpts {
    std::string output;
    long seed = 12345;
};

std::string header(const std::string& what, const CommonOpts& c,
                   const std::string& bias) {
    std::ostringstream os;
    os << "# lsk " << what << "\n# seed: " << c.seed << "\n# bias: " << bias
       << "\n";
    return os.str();
}

// flags override values from --config <json>
void apply_config_file(std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size();) {
        if (args[i] == "--config") {
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else {
            ++i;
        }
    }
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    nlohmann::json j;
    in >> j;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string flag = "--" + it.key();
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        if (it.value().is_string())
            args.push_back(it.value().get<std::string>());
        else
            args.push_back(it.value().dump());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lsk: convex entire spacelike surfaces in Minkowski 3-space"};
    app.require_subcommand(1);

    CommonOpts common;

    // family sample ----------------------------------------------------------
    auto* family = app.add_subcommand("family", "surface families");
    auto* fsample = family->add_subcommand("sample", "sample a family to CSV");
    std::string f_kind = "hyperboloid";
    double f_lambda = 1.0, f_eps = 0.5, f_alpha = 0.5, f_beta = 0.5,
           f_gamma = 0.25, f_M = 8.0;
    std::string f_t = "0.1:3:50", f_s = "-2:2:50";
    fsample->add_option("--kind", f_kind, "family kind");
    fsample->add_option("--lambda", f_lambda, "glide parameter");
    fsample->add_option("--eps", f_eps, "family epsilon");
    fsample->add_option("--alpha", f_alpha, "barrier alpha");
    fsample->add_option("--beta", f_beta, "barrier beta");
    fsample->add_option("--gamma", f_gamma, "barrier gamma");
    fsample->add_option("--M", f_M, "barrier M");
    fsample->add_option("--t", f_t, "first parameter range a:b:N or a:b:logN");
    fsample->add_option("--s", f_s, "second parameter range");
    fsample->add_option("--output", common.output, "output file (default stdout)");
    fsample->add_option("--seed", common.seed, "seed recorded in outputs");

    // support ----------------------------------------------------------------
    auto* support = app.add_subcommand("support", "support-function tools");
    auto* sconvert = support->add_subcommand("convert", "elliptic <-> parabolic");
    std::string sc_from = "parabolic", sc_u = "hyperboloid", sc_phi = "constant:0";
    int sc_grid = 512;
    sconvert->add_option("--from", sc_from, "parabolic | elliptic");
    sconvert->add_option("--u", sc_u, "parabolic family (hyperboloid, parabolic:eps)");
    sconvert->add_option("--phi", sc_phi, "elliptic phi spec");
    sconvert->add_option("--grid", sc_grid, "output sample count");
    sconvert->add_option("--output", common.output, "output file");
    sconvert->add_option("--seed", common.seed, "seed");

    auto* sdod = support->add_subcommand("dod", "domain-of-dependence heights");
    std::string sd_phi = "constant:0", sd_grid = "-5:5:101";
    sdod->add_option("--phi", sd_phi, "phi spec");
    sdod->add_option("--grid", sd_grid, "square grid range a:b:N");
    sdod->add_option("--output", common.output, "output file");
    sdod->add_option("--seed", common.seed, "seed");

    auto* sfrom = support->add_subcommand("from-samples", "regularize sampled phi");
    std::string sf_input;
    bool sf_dod = false;
    std::string sf_grid = "-5:5:101";
    sfrom->add_option("--input", sf_input, "CSV of theta,value,is_infinite")
        ->required();
    sfrom->add_flag("--dod", sf_dod, "emit dod heights instead of samples");
    sfrom->add_option("--grid", sf_grid, "dod grid");
    sfrom->add_option("--output", common.output, "output file");
    sfrom->add_option("--seed", common.seed, "seed");

    // curvature ---------------------------------------------------------------
    auto* curv = app.add_subcommand("curvature", "curvature reports");
    auto* cgrid = curv->add_subcommand("grid", "curvature grid to CSV");
    std::string c_kind = "glide";
    double c_lambda = 1.0, c_eps = 0.5, c_alpha = 0.5, c_beta = 0.5,
           c_gamma = 0.25, c_M = 8.0;
    std::string c_t = "0.2:3:log50", c_s = "-2:2:50";
    cgrid->add_option("--family", c_kind, "family kind");
    cgrid->add_option("--lambda", c_lambda, "glide parameter");
    cgrid->add_option("--eps", c_eps, "family epsilon");
    cgrid->add_option("--alpha", c_alpha, "barrier alpha");
    cgrid->add_option("--beta", c_beta, "barrier beta");
    cgrid->add_option("--gamma", c_gamma, "barrier gamma");
    cgrid->add_option("--M", c_M, "barrier M");
    cgrid->add_option("--t", c_t, "first chart range");
    cgrid->add_option("--s", c_s, "second chart range");
    cgrid->add_option("--output", common.output, "output file");
    cgrid->add_option("--seed", common.seed, "seed");

    // geodesic ----------------------------------------------------------------
    auto* geo = app.add_subcommand("geodesic", "geodesic traces");
    auto* gtrace = geo->add_subcommand("trace", "integrate a geodesic");
    std::string g_kind = "glide", g_preset = "";
    double g_lambda = 1.0, g_eps = 0.5;
    double g_u0 = 1.0, g_v0 = 0.0, g_du = 1.0, g_dv = 0.0, g_maxlen = 10.0;
    gtrace->add_option("--family", g_kind, "family kind");
    gtrace->add_option("--lambda", g_lambda, "glide parameter");
    gtrace->add_option("--eps", g_eps, "family epsilon");
    gtrace->add_option("--preset", g_preset, "incomplete-ray | radial");
    gtrace->add_option("--u0", g_u0, "chart start");
    gtrace->add_option("--v0", g_v0, "chart start");
    gtrace->add_option("--du", g_du, "chart velocity");
    gtrace->add_option("--dv", g_dv, "chart velocity");
    gtrace->add_option("--max-length", g_maxlen, "length budget");
    gtrace->add_option("--output", common.output, "output file");
    gtrace->add_option("--seed", common.seed, "seed");

    // criteria ----------------------------------------------------------------
    auto* crit = app.add_subcommand("criteria", "completeness criteria");
    auto* ccheck = crit->add_subcommand("check", "evaluate a criterion");
    std::string k_condition = "comp", k_phi = "constant:0";
    double k_theta0 = 0.0, k_M = 1.0, k_lambda = 1.0, k_eps = 1.0,
           k_alpha = 0.5, k_slope = 0.0;
    int k_side = 1, k_depth = 40;
    ccheck->add_option("--condition", k_condition,
                       "comp | comp-prime | inc | inc-prime | null-line");
    ccheck->add_option("--phi", k_phi, "phi spec");
    ccheck->add_option("--theta0", k_theta0, "base direction");
    ccheck->add_option("--M", k_M, "comp slope");
    ccheck->add_option("--lambda", k_lambda, "comp-prime constant");
    ccheck->add_option("--eps", k_eps, "inc/inc-prime constant");
    ccheck->add_option("--alpha", k_alpha, "inc exponent");
    ccheck->add_option("--side", k_side, "comp-prime side +-1");
    ccheck->add_option("--slope", k_slope, "null-line slope m");
    ccheck->add_option("--depth", k_depth, "probe depth");
    ccheck->add_option("--output", common.output, "output file");
    ccheck->add_option("--seed", common.seed, "seed");

    // verify ------------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "acceptance suite");
    auto* vall = verify_cmd->add_subcommand("all", "run every criterion");
    std::string v_only;
    vall->add_option("--only", v_only,
                     "subset, comma-separated indices or a module name");
    vall->add_option("--output", common.output, "JSON report file");
    vall->add_option("--seed", common.seed, "seed");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        apply_config_file(args);
        std::vector<const char*> cargs{argv[0]};
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (fsample->parsed()) {
            const ExplicitSurface s = parse_family(f_kind, f_lambda, f_eps,
                                                   f_alpha, f_beta, f_gamma, f_M);
            const ImmersionChart chart = make_chart(s);
            const auto us = parse_range(f_t).points();
            const auto vs = parse_range(f_s).points();
            std::vector<std::string> rows(us.size() * vs.size());
            parallel_rows(rows.size(), [&](std::size_t k) {
                const double u = us[k / vs.size()], v = vs[k % vs.size()];
                const Vec3 p = chart.eval(u, v);
                rows[k] = fmt(u) + "," + fmt(v) + "," + fmt(p.x) + "," +
                          fmt(p.y) + "," + fmt(p.z) + "\n";
            });
            std::ostringstream os;
            os << header("family sample " + family_name(s), common,
                         "exact closed-form evaluation");
            os << "u1,u2,x,y,z\n";
            for (const auto& r : rows) os << r;
            write_output(common.output, os.str());
            return 0;
        }

        if (sconvert->parsed()) {
            std::ostringstream os;
            if (sc_from == "parabolic") {
                // psi data: a closed-form family or a CSV of x,value samples
                std::function<ExtReal(double)> psi;
                std::vector<double> xs_in;
                if (sc_u == "hyperboloid" || sc_u.rfind("parabolic", 0) == 0) {
                    ParabolicSupportFn u;
                    if (sc_u == "hyperboloid")
                        u = family_parabolic_support(Hyperboloid{});
                    else {
                        const auto c = sc_u.find(':');
                        const double eps = c == std::string::npos
                                               ? 0.5
                                               : std::stod(sc_u.substr(c + 1));
                        u = family_parabolic_support(ParabolicInvariant{eps});
                    }
                    psi = [u](double x) { return u(x, 0.0); };
                    for (int k = 0; k < sc_grid; ++k) {
                        const double th = -M_PI + 2 * M_PI * (k + 0.5) / sc_grid;
                        xs_in.push_back(chart_boundary_x(ChartKind::zeta, th));
                    }
                } else if (sc_u.rfind("csv:", 0) == 0) {
                    std::ifstream in(sc_u.substr(4));
                    if (!in) throw ConfigError("cannot open " + sc_u.substr(4));
                    std::string line;
                    auto samples = std::make_shared<std::map<double, ExtReal>>();
                    while (std::getline(in, line)) {
                        if (line.empty() || line[0] == '#' ||
                            line.rfind("x,", 0) == 0)
                            continue;
                        double x = 0, v = 0;
                        int isinf = 0;
                        if (std::sscanf(line.c_str(), "%lf,%lf,%d", &x, &v,
                                        &isinf) < 2)
                            throw ConfigError("bad psi row: " + line);
                        (*samples)[x] = isinf ? ExtReal::infinity() : ExtReal(v);
                        xs_in.push_back(x);
                    }
                    if (samples->empty()) throw ConfigError("empty psi csv");
                    psi = [samples](double x) {
                        auto it = samples->lower_bound(x);
                        if (it == samples->end()) return std::prev(it)->second;
                        if (it == samples->begin() ||
                            std::abs(it->first - x) <=
                                std::abs(std::prev(it)->first - x))
                            return it->second;
                        return std::prev(it)->second;
                    };
                } else
                    throw ConfigError("unknown --u spec: " + sc_u);
                os << header("support convert parabolic->elliptic", common,
                             "exact chart conversion off the point at infinity");
                os << "theta,value,is_infinite\n";
                for (double x : xs_in) {
                    const double th = chart_boundary_theta(ChartKind::zeta, x);
                    const ExtReal v = psi(x) / (1.0 + x * x);
                    os << fmt(th) << ',' << fmt(v.is_infinite() ? 0.0 : v.value())
                       << ',' << (v.is_infinite() ? 1 : 0) << '\n';
                }
            } else if (sc_from == "elliptic") {
                const NullSupportFn phi = parse_phi(sc_phi);
                os << header("support convert elliptic->parabolic", common,
                             "exact chart conversion; x = tan(theta/2) over the theta grid");
                os << "x,value,is_infinite\n";
                for (int k = 0; k < sc_grid; ++k) {
                    // chart image of the uniform theta grid, skipping the
                    // direction at infinity: converting back lands on the
                    // same angles exactly
                    const double th = -M_PI + 2 * M_PI * (k + 0.5) / sc_grid;
                    const double x = chart_boundary_x(ChartKind::zeta, th);
                    const ExtReal v =
                        elliptic_to_parabolic([&](double t2) { return phi(t2); },
                                              ChartKind::zeta, x);
                    os << fmt(x) << ',' << fmt(v.is_infinite() ? 0.0 : v.value())
                       << ',' << (v.is_infinite() ? 1 : 0) << '\n';
                }
            } else
                throw ConfigError("--from must be parabolic or elliptic");
            write_output(common.output, os.str());
            return 0;
        }

        if (sdod->parsed() || sfrom->parsed()) {
            NullSupportFn phi = sdod->parsed() ? parse_phi(sd_phi) : [&] {
                std::ifstream in(sf_input);
                if (!in) throw ConfigError("cannot open " + sf_input);
                std::stringstream ss;
                ss << in.rdbuf();
                return support_from_csv(ss.str());
            }();
            std::ostringstream os;
            if (sfrom->parsed() && !sf_dod) {
                os << header("support from-samples", common,
                             "lsc-regularized sample values");
                os << support_to_csv(phi);
            } else {
                const Range g = parse_range(sdod->parsed() ? sd_grid : sf_grid);
                const auto xs = g.points();
                std::vector<std::string> rows(xs.size() * xs.size());
                parallel_rows(rows.size(), [&](std::size_t k) {
                    const double x = xs[k / xs.size()], y = xs[k % xs.size()];
                    rows[k] = fmt(x) + "," + fmt(y) + "," +
                              fmt(dod_boundary_height(phi, x, y).z) + "\n";
                });
                os << header("support dod", common,
                             "lower bound (envelope over the probe grid)");
                os << "x,y,z\n";
                for (const auto& r : rows) os << r;
            }
            write_output(common.output, os.str());
            return 0;
        }

        if (cgrid->parsed()) {
            const ExplicitSurface s = parse_family(c_kind, c_lambda, c_eps,
                                                   c_alpha, c_beta, c_gamma, c_M);
            const auto us = parse_range(c_t).points();
            const auto vs = parse_range(c_s).points();
            const bool support_route =
                std::holds_alternative<ParabolicInvariant>(s) ||
                std::holds_alternative<HolderBarrier>(s) ||
                std::holds_alternative<Hyperboloid>(s);
            std::ostringstream os;
            os << header("curvature grid " + family_name(s), common,
                         "K exact to solver tolerance; F = -4/K");
            os << "x,y,K,F,detA,gx,gy,gz\n";
            std::vector<std::string> rows(us.size() * vs.size());
            if (support_route) {
                const ParabolicSupportFn u = family_parabolic_support(s);
                parallel_rows(rows.size(), [&](std::size_t k) {
                    const double x = us[k / vs.size()], y = vs[k % vs.size()];
                    const CurvatureReport rep = curvature_from_support(u, x, y);
                    rows[k] = fmt(x) + "," + fmt(y) + "," + fmt(rep.K) + "," +
                              fmt(rep.F_value) + "," + fmt(rep.A.det()) + "," +
                              fmt(rep.gamma.x) + "," + fmt(rep.gamma.y) + "," +
                              fmt(rep.gamma.z) + "\n";
                });
            } else {
                const ImmersionChart chart = make_chart(s);
                parallel_rows(rows.size(), [&](std::size_t k) {
                    const double uu = us[k / vs.size()], vv = vs[k % vs.size()];
                    const FundamentalForms ff = fundamental_forms(chart, uu, vv);
                    const Vec3 p = chart.eval(uu, vv);
                    rows[k] = fmt(uu) + "," + fmt(vv) + "," + fmt(ff.K) + "," +
                              fmt(-4.0 / ff.K) + "," + fmt(-1.0 / ff.K) + "," +
                              fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.z) + "\n";
                });
            }
            for (const auto& r : rows) os << r;
            write_output(common.output, os.str());
            return 0;
        }

        if (gtrace->parsed()) {
            const ExplicitSurface s =
                parse_family(g_kind, g_lambda, g_eps, 0.5, 0.5, 0.25, 8.0);
            const ImmersionChart chart = make_chart(s);
            IntegrateOptions opts;
            opts.max_length = g_maxlen;
            opts.max_param = std::max(g_maxlen, 10.0);
            double u0 = g_u0, v0 = g_v0, du = g_du, dv = g_dv;
            if (g_preset == "incomplete-ray") {
                const double c = std::sqrt(1 + g_lambda * g_lambda);
                u0 = std::abs(g_lambda);
                v0 = g_lambda > 0 ? -c : c;
                du = std::abs(g_lambda);
                dv = g_lambda > 0 ? -c : c;
                opts.max_length = std::min(opts.max_length, 50.0);
            } else if (g_preset == "radial") {
                u0 = 0;
                v0 = chart.v_min >= 0 ? 1.0 : 0.0;
                du = 1;
                dv = 0;
            }
            const GeodesicTrace tr =
                integrate_geodesic_chart(chart, u0, v0, du, dv, opts);
            std::ostringstream os;
            os << header("geodesic trace " + family_name(s), common,
                         "integrated to step tolerance " + fmt(opts.tol));
            os << "# termination: "
               << (tr.termination == Termination::length_converged
                       ? "length_converged"
                       : tr.termination == Termination::chart_boundary
                             ? "chart_boundary"
                             : "budget_exhausted")
               << "\n";
            os << "tau,x,y,z,vx,vy,vz,len\n";
            for (const auto& smp : tr.samples)
                os << fmt(smp.tau) << ',' << fmt(smp.point.x) << ','
                   << fmt(smp.point.y) << ',' << fmt(smp.point.z) << ','
                   << fmt(smp.velocity.x) << ',' << fmt(smp.velocity.y) << ','
                   << fmt(smp.velocity.z) << ',' << fmt(smp.length) << '\n';
            write_output(common.output, os.str());
            return 0;
        }

        if (ccheck->parsed()) {
            const NullSupportFn phi = parse_phi(k_phi);
            ProbeSpec probe;
            probe.depth = k_depth;
            CriterionVerdict v;
            if (k_condition == "comp")
                v = check_comp(phi, k_theta0, k_M, probe);
            else if (k_condition == "comp-prime")
                v = check_comp_prime(phi, k_theta0, k_lambda, k_side, probe);
            else if (k_condition == "inc")
                v = check_inc(phi, k_theta0, k_eps, k_alpha, probe);
            else if (k_condition == "inc-prime")
                v = check_inc_prime(phi, k_theta0, k_eps, probe);
            else if (k_condition == "null-line")
                v = null_line_disjoint(phi, k_theta0, k_slope, 40, probe);
            else
                throw ConfigError("unknown condition: " + k_condition);
            write_output(common.output, verdict_to_json(v) + "\n");
            return 0;
        }

        if (vall->parsed()) {
            std::vector<int> only;
            if (!v_only.empty()) {
                static const std::map<std::string, std::vector<int>> groups = {
                    {"curvature", {1, 2}},   {"geodesics", {3, 4, 9}},
                    {"support", {5, 6}},     {"criteria", {7, 8}},
                    {"comparison", {10}}};
                auto it = groups.find(v_only);
                if (it != groups.end())
                    only = it->second;
                else {
                    std::stringstream ss(v_only);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) only.push_back(std::stoi(tok));
                }
            }
            const auto results = verify::run_acceptance(only);
            for (const auto& r : results)
                std::printf("[%s] %2d %-46s measured=%.3g tol=%.3g %5.2fs %s\n",
                            r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(),
                            r.measured, r.tolerance, r.runtime_s,
                            r.detail.c_str());
            const std::string js = verify::results_json(results) + "\n";
            if (!common.output.empty()) write_output(common.output, js);
            return verify::all_passed(results) ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "no subcommand\n";
    return 2;
}
