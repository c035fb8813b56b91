#include "cli.hpp"

#include "tvgap/elliptic.hpp"
#include "tvgap/hill.hpp"
#include "tvgap/multiplicity.hpp"
#include "tvgap/parallel.hpp"
#include "tvgap/premodular.hpp"
#include "tvgap/spectral.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace tvgap::cli {

using json = nlohmann::ordered_json;

namespace {

double to_double(const std::string& s) {
    double v = 0.0;
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    if (!s.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw DomainError("not a number: '" + s + "'");
    return v;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

json jc(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json jcs(const std::vector<cplx>& v) {
    json a = json::array();
    for (cplx z : v) a.push_back(jc(z));
    return a;
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct Config {
    std::string command;
    std::string n_str;
    std::array<int, 4> n{};
    std::string tau_str = "0+1i";
    std::string b_str = "0.5:2:31";
    std::string E_str;
    std::string E_im_str = "0:0:1";
    std::string format = "json";
    std::string out_path, summary_path, plot_path;
    bool no_timestamp = false;
    unsigned threads = 1;
    SpectralOptions sopt;
    HillOptions hopt;
    ZeroFindOptions zopt;
    // premodular
    std::string op = "eval";
    int index = 2;
    double r = 0.15, s = 0.15;
    std::string seed_tau;
    int random_seeds = 0;
    std::uint64_t seed = 1;
    int nr = 20, ns = 20, per_piece = 20;
    double h_min = 0.05, h_max = 10.0, floor = 1e-8;
    std::string tau_re_grid = "0:1:41", tau_im_grid = "0.3:2:41";
};

json tolerances(const Config& c) {
    return json{
        {"rank_tol", c.sopt.rank_tol},
        {"tol_im", c.sopt.tol_im},
        {"tol_gap", c.sopt.tol_gap},
        {"z_check_tol", c.sopt.z_check_tol},
        {"route_tol", c.sopt.route_tol},
        {"residual_tol", c.sopt.residual_tol},
        {"rtol", c.hopt.rtol},
        {"atol", c.hopt.atol},
        {"at_root_tol", c.hopt.at_root_tol},
        {"trace_tol", c.hopt.trace_tol},
        {"edge_tol", c.hopt.edge_tol},
        {"edge_match_tol", c.hopt.edge_match_tol},
        {"dual_tol", c.hopt.dual_tol},
        {"newton_h", c.zopt.h},
        {"newton_z_tol", c.zopt.z_tol},
        {"newton_step_tol", c.zopt.step_tol},
        {"f0_tol", c.zopt.f0_tol},
        {"premodular_floor", c.floor},
    };
}

/// Collects one payload and writes it as JSON or CSV.
class Payload {
public:
    Payload(const Config& c, std::ostream& out) : c_(c), out_(out) {}

    json doc;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void emit() {
        std::ofstream file;
        std::ostream* os = &out_;
        if (!c_.out_path.empty()) {
            file.open(c_.out_path);
            if (!file) throw DomainError("cannot open output file " + c_.out_path);
            os = &file;
        }
        if (c_.format == "csv") {
            if (!c_.no_timestamp) *os << "# generated " << timestamp() << '\n';
            *os << "# command " << c_.command << '\n';
            const json tol = tolerances(c_);
            for (const auto& [k, v] : tol.items()) *os << "# tol " << k << '=' << v.dump() << '\n';
            write_row(*os, columns);
            for (const auto& r : rows) write_row(*os, r);
            if (!c_.summary_path.empty()) {
                std::ofstream sf(c_.summary_path);
                if (!sf) throw DomainError("cannot open summary file " + c_.summary_path);
                sf << full().dump(2) << '\n';
            }
        } else {
            *os << full().dump(2) << '\n';
        }
    }

private:
    json full() const {
        json j;
        j["command"] = c_.command;
        j["tolerances"] = tolerances(c_);
        for (const auto& [k, v] : doc.items()) j[k] = v;
        return j;
    }
    static void write_row(std::ostream& os, const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
        os << '\n';
    }

    const Config& c_;
    std::ostream& out_;
};

std::string join_roots(const std::vector<cplx>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_complex(v[i]);
    return s;
}

double min_gap(const std::vector<cplx>& v) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) g = std::min(g, std::abs(v[i] - v[j]));
    return g;
}

double max_imag(const std::vector<cplx>& v) {
    double m = 0.0;
    for (cplx z : v) m = std::max(m, std::abs(z.imag()));
    return m;
}

MultiplicityTuple tuple_of(const Config& c) { return MultiplicityTuple(c.n); }

int cmd_qpoly(const Config& c, std::ostream& out) {
    const MultiplicityTuple n = tuple_of(c);
    const LatticeData L(parse_complex(c.tau_str));
    const SpectralReport rep = spectral_report(L, n, c.sopt);
    Payload p(c, out);
    p.doc["tuple"] = n.n();
    p.doc["tau"] = jc(L.tau());
    p.doc["genus"] = n.genus();
    p.doc["degree"] = n.degree();
    p.doc["condition_class"] = std::string(to_string(n.condition_class()));
    p.doc["coefficients"] = jcs(rep.Q.coeffs());
    p.doc["roots"] = jcs(rep.roots.roots);
    p.doc["residuals"] = rep.roots.residuals;
    p.doc["classification"] = std::string(to_string(rep.roots.classification));
    p.doc["root_source"] = rep.root_source;
    p.doc["factorization_constructible"] = rep.factorization_constructible;
    p.doc["factorization_note"] = rep.factorization_note;
    p.doc["route_discrepancy"] = rep.route_discrepancy ? json(*rep.route_discrepancy) : json(nullptr);
    p.doc["factor_separation"] = rep.factor_separation ? json(*rep.factor_separation) : json(nullptr);
    p.doc["phi"] = json{{"sample_radius", rep.phi.sample_radius},
                        {"samples", rep.phi.samples},
                        {"null_ratio", rep.phi.null_ratio},
                        {"gap_ratio", rep.phi.gap_ratio},
                        {"lower_degree_ratio", rep.phi.lower_degree_ratio},
                        {"b_leading", rep.phi.b_leading},
                        {"z_discrepancy", rep.phi.z_discrepancy},
                        {"sample_discrepancy", rep.phi.sample_discrepancy}};
    p.columns = {"index", "root", "residual", "residual_bound"};
    for (std::size_t i = 0; i < rep.roots.roots.size(); ++i)
        p.rows.push_back({std::to_string(i), format_complex(rep.roots.roots[i]), fmt(rep.roots.residuals[i]),
                          fmt(rep.roots.residual_bounds[i])});
    p.emit();
    return kOk;
}

int cmd_scan(const Config& c, std::ostream& out) {
    const MultiplicityTuple n = tuple_of(c);
    const Grid g = parse_grid(c.b_str);
    const ScanResult res = tau_scan(n, g.lo, g.hi, g.count, c.sopt, c.threads);
    Payload p(c, out);
    p.columns = {"b", "classification", "min_gap", "max_abs_imag", "route_discrepancy", "roots", "error"};
    json pts = json::array();
    for (const ScanPoint& pt : res.points) {
        json j{{"b", pt.b}};
        if (pt.report) {
            const auto& rr = pt.report->roots;
            const std::string cls(to_string(rr.classification));
            const auto& rd = pt.report->route_discrepancy;
            j["classification"] = cls;
            j["roots"] = jcs(rr.roots);
            j["route_discrepancy"] = rd ? json(*rd) : json(nullptr);
            p.rows.push_back({fmt(pt.b), cls, fmt(min_gap(rr.roots)), fmt(max_imag(rr.roots)), rd ? fmt(*rd) : "",
                              join_roots(rr.roots), ""});
        } else {
            j["error"] = pt.error;
            p.rows.push_back({fmt(pt.b), "", "", "", "", "", pt.error});
        }
        pts.push_back(j);
    }
    p.doc["tuple"] = n.n();
    p.doc["condition_class"] = std::string(to_string(n.condition_class()));
    p.doc["b_grid"] = json{{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}};
    p.doc["all_real_distinct"] = res.all_real_distinct;
    p.doc["not_real_distinct"] = res.not_real_distinct;
    p.doc["errors"] = res.errors;
    p.doc["points"] = pts;
    p.emit();
    return kOk;
}

GLEProblem make_problem(const Config& c, const LatticeData& L) {
    const MultiplicityTuple n = tuple_of(c);
    return GLEProblem(L, n, spectral_report(L, n, c.sopt), c.hopt);
}

json bands_json(const std::vector<Band>& bs) {
    json a = json::array();
    for (const Band& b : bs)
        a.push_back(json{{"lo", jnum(b.lo)}, {"hi", jnum(b.hi)}, {"open_left", b.open_left}, {"open_right", b.open_right}});
    return a;
}

int cmd_bands(const Config& c, std::ostream& out) {
    if (c.E_str.empty()) throw DomainError("bands needs --E lo:hi:count");
    const Grid g = parse_grid(c.E_str);
    const LatticeData L(parse_complex(c.tau_str));
    const GLEProblem P = make_problem(c, L);
    const BandReport br = P.stability_set_1d(g.lo, g.hi, g.count);
    Payload p(c, out);
    p.doc["tuple"] = P.tuple().n();
    p.doc["tau"] = jc(L.tau());
    p.doc["bands"] = bands_json(br.bands);
    p.doc["edges"] = br.edges;
    p.doc["roots"] = br.roots;
    p.doc["max_edge_error"] = jnum(br.max_edge_error);
    p.doc["semi_infinite"] = br.semi_infinite;
    p.doc["left_semi_infinite"] = br.left_semi_infinite;
    p.doc["edges_match"] = br.edges_match;
    p.columns = {"band", "lo", "hi"};
    for (std::size_t i = 0; i < br.bands.size(); ++i)
        p.rows.push_back({std::to_string(i), fmt(br.bands[i].lo), fmt(br.bands[i].hi)});
    if (!c.plot_path.empty()) {
        std::ofstream f(c.plot_path);
        if (!f) throw DomainError("cannot open plot file " + c.plot_path);
        f << "# E re_delta1\n";
        for (const auto& [E, d] : br.samples) f << fmt(E) << ' ' << fmt(d) << '\n';
    }
    p.emit();
    return br.edges_match ? kOk : kAssertion;
}

int cmd_dual(const Config& c, std::ostream& out) {
    if (c.E_str.empty()) throw DomainError("dual needs --E lo:hi:count");
    const Grid g = parse_grid(c.E_str);
    const LatticeData L(parse_complex(c.tau_str));
    const GLEProblem P = make_problem(c, L);
    const DualTorusReport d = dual_torus_exclusion(P, g.lo, g.hi, g.count);
    Payload p(c, out);
    p.doc["tuple"] = P.tuple().n();
    p.doc["tau"] = jc(L.tau());
    p.doc["bands"] = bands_json(d.bands);
    p.doc["dual_bands"] = bands_json(d.dual_bands);
    json iv = json::array();
    for (const Interval& i : d.intersections) iv.push_back(json{{"lo", i.lo}, {"hi", i.hi}});
    p.doc["intersections"] = iv;
    p.doc["roots"] = d.roots;
    p.doc["far_from_roots"] = d.far_from_roots;
    p.doc["roots_hit"] = d.roots_hit;
    p.doc["pass"] = d.pass;
    p.columns = {"lo", "hi"};
    for (const Interval& i : d.intersections) p.rows.push_back({fmt(i.lo), fmt(i.hi)});
    p.emit();
    return d.pass ? kOk : kAssertion;
}

int cmd_unitary(const Config& c, std::ostream& out) {
    if (c.E_str.empty()) throw DomainError("unitary needs --E lo:hi:count");
    const Grid gr = parse_grid(c.E_str), gi = parse_grid(c.E_im_str);
    const LatticeData L(parse_complex(c.tau_str));
    const GLEProblem P = make_problem(c, L);
    const std::size_t N = static_cast<std::size_t>(gr.count) * static_cast<std::size_t>(gi.count);
    std::vector<std::optional<UnitarityReport>> res(N);
    std::vector<std::string> errs(N);
    parallel_for(N, c.threads, [&](std::size_t k) {
        const cplx E(gr.at(static_cast<int>(k % gr.count)), gi.at(static_cast<int>(k / gr.count)));
        try {
            res[k] = P.unitarity_probe(E);
        } catch (const std::exception& e) {
            errs[k] = e.what();
        }
    });
    Payload p(c, out);
    p.columns = {"E", "delta1", "delta2", "at_root", "unitary", "error"};
    int unitary = 0, at_root = 0, errors = 0;
    json pts = json::array();
    for (std::size_t k = 0; k < N; ++k) {
        const cplx E(gr.at(static_cast<int>(k % gr.count)), gi.at(static_cast<int>(k / gr.count)));
        if (res[k]) {
            const auto& u = *res[k];
            unitary += u.unitary;
            at_root += u.at_root;
            p.rows.push_back({format_complex(E), format_complex(u.delta1), format_complex(u.delta2),
                              u.at_root ? "1" : "0", u.unitary ? "1" : "0", ""});
            pts.push_back(json{{"E", jc(E)}, {"delta1", jc(u.delta1)}, {"delta2", jc(u.delta2)},
                               {"at_root", u.at_root}, {"unitary", u.unitary}});
        } else {
            ++errors;
            p.rows.push_back({format_complex(E), "", "", "", "", errs[k]});
            pts.push_back(json{{"E", jc(E)}, {"error", errs[k]}});
        }
    }
    p.doc["tuple"] = P.tuple().n();
    p.doc["tau"] = jc(L.tau());
    p.doc["condition_class"] = std::string(to_string(P.tuple().condition_class()));
    p.doc["points_total"] = N;
    p.doc["unitary_count"] = unitary;
    p.doc["at_root_count"] = at_root;
    p.doc["errors"] = errors;
    p.doc["points"] = pts;
    p.emit();
    return kOk;
}

json zero_json(const ZeroFindResult& z) {
    return json{{"seed", jc(z.seed)},           {"converged", z.converged},
                {"tau_zero", jc(z.tau_zero)},   {"residual", jnum(z.residual)},
                {"location", std::string(to_string(z.location))},
                {"inside_f0", z.inside_f0},     {"iterations", z.iterations},
                {"note", z.note}};
}

int cmd_premodular(const Config& c, std::ostream& out) {
    Payload p(c, out);
    p.doc["op"] = c.op;
    p.doc["n"] = c.index;
    if (c.op == "eval") {
        const LatticeData L(parse_complex(c.tau_str));
        const cplx z = z_n(L, c.r, c.s, c.index);
        p.doc["r"] = c.r;
        p.doc["s"] = c.s;
        p.doc["tau"] = jc(L.tau());
        p.doc["half_lattice"] = on_half_lattice(c.r, c.s);
        p.doc["value"] = jc(z);
        p.columns = {"r", "s", "tau", "value"};
        p.rows.push_back({fmt(c.r), fmt(c.s), format_complex(L.tau()), format_complex(z)});
        p.emit();
        return kOk;
    }
    if (c.op == "boundary-scan") {
        const auto rs = rs_grid(c.nr, c.ns);
        const auto taus = boundary_tau_grid(c.per_piece, c.h_min, c.h_max);
        const BoundaryScanReport b = boundary_nonvanishing_scan(c.index, rs, taus, c.floor, c.threads);
        p.doc["rs_grid"] = json{{"nr", c.nr}, {"ns", c.ns}};
        p.doc["tau_grid"] = json{{"per_piece", c.per_piece}, {"h_min", c.h_min}, {"h_max", c.h_max}};
        p.doc["min_abs"] = b.min_abs;
        p.doc["argmin"] = json{{"r", b.argmin_r}, {"s", b.argmin_s}, {"tau", jc(b.argmin_tau)}};
        p.doc["evaluated"] = b.evaluated;
        p.doc["below_floor"] = b.below_floor;
        p.doc["flagged"] = b.flagged;
        p.doc["errors"] = b.errors;
        p.doc["pass"] = b.pass;
        p.columns = {"n", "min_abs", "argmin_r", "argmin_s", "argmin_tau", "evaluated", "below_floor", "pass"};
        p.rows.push_back({std::to_string(c.index), fmt(b.min_abs), fmt(b.argmin_r), fmt(b.argmin_s),
                          format_complex(b.argmin_tau), std::to_string(b.evaluated), std::to_string(b.below_floor),
                          b.pass ? "1" : "0"});
        p.emit();
        return b.pass ? kOk : kAssertion;
    }
    if (c.op == "zero-find") {
        std::vector<cplx> seeds;
        if (!c.seed_tau.empty()) {
            seeds.push_back(parse_complex(c.seed_tau));
        } else {
            seeds = f0_seed_lattice();
        }
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> ux(0.0, 1.0), uy(0.5, 2.5);
        for (int k = 0; k < c.random_seeds; ++k) seeds.emplace_back(ux(rng), uy(rng));
        const MultiStartResult m = zero_find_multistart(c.index, c.r, c.s, seeds, c.zopt, c.threads);
        p.doc["r"] = c.r;
        p.doc["s"] = c.s;
        p.doc["triangle"] = std::string(to_string(triangle_of(c.r, c.s)));
        p.doc["seed"] = c.seed;
        p.doc["converged_in_f0"] = m.converged_in_f0;
        p.doc["found"] = m.found ? zero_json(*m.found) : json(nullptr);
        json runs = json::array();
        p.columns = {"seed", "converged", "tau_zero", "residual", "location", "inside_f0", "iterations", "note"};
        for (const auto& z : m.runs) {
            runs.push_back(zero_json(z));
            p.rows.push_back({format_complex(z.seed), z.converged ? "1" : "0", format_complex(z.tau_zero),
                              fmt(z.residual), std::string(to_string(z.location)), z.inside_f0 ? "1" : "0",
                              std::to_string(z.iterations), z.note});
        }
        p.doc["runs"] = runs;
        p.emit();
        return kOk;
    }
    if (c.op == "heatmap") {
        const Grid gx = parse_grid(c.tau_re_grid), gy = parse_grid(c.tau_im_grid);
        const std::size_t N = static_cast<std::size_t>(gx.count) * static_cast<std::size_t>(gy.count);
        std::vector<double> v(N, std::numeric_limits<double>::quiet_NaN());
        parallel_for(N, c.threads, [&](std::size_t k) {
            const cplx t(gx.at(static_cast<int>(k % gx.count)), gy.at(static_cast<int>(k / gx.count)));
            try {
                v[k] = std::abs(z_n(t, c.r, c.s, c.index));
            } catch (const std::exception&) {
            }
        });
        p.columns = {"re_tau", "im_tau", "abs_z"};
        json pts = json::array();
        for (std::size_t k = 0; k < N; ++k) {
            const double x = gx.at(static_cast<int>(k % gx.count)), y = gy.at(static_cast<int>(k / gx.count));
            p.rows.push_back({fmt(x), fmt(y), fmt(v[k])});
            pts.push_back(json{x, y, jnum(v[k])});
        }
        p.doc["r"] = c.r;
        p.doc["s"] = c.s;
        p.doc["points"] = pts;
        p.emit();
        return kOk;
    }
    throw DomainError("unknown premodular op '" + c.op + "'");
}

void error_json(std::ostream& err, const std::string& kind, const std::string& msg, int code) {
    err << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << '\n';
}

} // namespace

cplx parse_complex(const std::string& in) {
    std::string s;
    for (char ch : in)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw DomainError("empty complex number");
    if (s.back() != 'i' && s.back() != 'j') return {to_double(s), 0.0};
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return to_double(t);
    };
    if (split == std::string::npos) return {0.0, imag(s)};
    return {to_double(s.substr(0, split)), imag(s.substr(split))};
}

Grid parse_grid(const std::string& s) {
    const auto a = s.find(':');
    const auto b = a == std::string::npos ? a : s.find(':', a + 1);
    if (b == std::string::npos) throw DomainError("grid must be start:stop:count, got '" + s + "'");
    Grid g;
    g.lo = to_double(s.substr(0, a));
    g.hi = to_double(s.substr(a + 1, b - a - 1));
    const double cnt = to_double(s.substr(b + 1));
    if (cnt < 1 || cnt != std::floor(cnt)) throw DomainError("grid count must be a positive integer");
    g.count = static_cast<int>(cnt);
    if (g.count > 1 && !(g.hi > g.lo)) throw DomainError("grid needs start < stop");
    return g;
}

std::string format_complex(cplx z) {
    std::string im = fmt(std::abs(z.imag()));
    return fmt(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    c.threads = default_thread_count();
    CLI::App app{"tvgap: spectral polynomials, monodromy and pre-modular forms for Treibich-Verdier potentials"};
    app.require_subcommand(1, 1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", c.out_path, "output file (default stdout)");
        sub->add_option("--summary", c.summary_path, "with --format csv: also write the JSON summary here");
        sub->add_flag("--no-timestamp", c.no_timestamp, "omit the CSV '# generated' header line");
        sub->add_option("--threads", c.threads, "worker threads (default $TVGAP_THREADS or hardware)")
            ->check(CLI::PositiveNumber);
        auto pos = CLI::PositiveNumber;
        sub->add_option("--rank-tol", c.sopt.rank_tol)->check(pos);
        sub->add_option("--tol-im", c.sopt.tol_im)->check(pos);
        sub->add_option("--tol-gap", c.sopt.tol_gap)->check(pos);
        sub->add_option("--z-check-tol", c.sopt.z_check_tol)->check(pos);
        sub->add_option("--route-tol", c.sopt.route_tol)->check(pos);
        sub->add_option("--residual-tol", c.sopt.residual_tol)->check(pos);
        sub->add_option("--rtol", c.hopt.rtol)->check(pos);
        sub->add_option("--atol", c.hopt.atol)->check(pos);
        sub->add_option("--at-root-tol", c.hopt.at_root_tol)->check(pos);
        sub->add_option("--trace-tol", c.hopt.trace_tol)->check(pos);
        sub->add_option("--edge-tol", c.hopt.edge_tol)->check(pos);
        sub->add_option("--edge-match-tol", c.hopt.edge_match_tol)->check(pos);
        sub->add_option("--dual-tol", c.hopt.dual_tol)->check(pos);
    };
    auto add_tuple = [&](CLI::App* sub) { sub->add_option("--n", c.n_str, "multiplicities n0,n1,n2,n3")->required(); };

    auto* q = app.add_subcommand("qpoly", "spectral polynomial, roots and classification at one tau\n"
                                          "  csv columns: index,root,residual,residual_bound");
    add_common(q);
    add_tuple(q);
    q->add_option("--tau", c.tau_str, "modulus, e.g. 0+1.2i");

    auto* sc = app.add_subcommand("scan", "classification along tau = i b\n"
                                          "  csv columns: b,classification,min_gap,max_abs_imag,route_discrepancy,roots,error");
    add_common(sc);
    add_tuple(sc);
    sc->add_option("--b", c.b_str, "b grid start:stop:count");

    auto* bd = app.add_subcommand("bands", "stability bands {|Delta1| <= 2} on a real E grid\n"
                                           "  csv columns: band,lo,hi; --plot writes 'E re_delta1'");
    add_common(bd);
    add_tuple(bd);
    bd->add_option("--tau", c.tau_str);
    bd->add_option("--E", c.E_str, "E grid start:stop:count")->required();
    bd->add_option("--plot", c.plot_path, "two-column Delta1 trace for plotting");

    auto* du = app.add_subcommand("dual", "band intersection with the dual torus -1/tau\n"
                                          "  csv columns: lo,hi of each intersection piece");
    add_common(du);
    add_tuple(du);
    du->add_option("--tau", c.tau_str);
    du->add_option("--E", c.E_str, "E grid start:stop:count")->required();

    auto* un = app.add_subcommand("unitary", "unitarity probe over a complex E grid\n"
                                             "  csv columns: E,delta1,delta2,at_root,unitary,error");
    add_common(un);
    add_tuple(un);
    un->add_option("--tau", c.tau_str);
    un->add_option("--E", c.E_str, "Re E grid start:stop:count")->required();
    un->add_option("--E-im", c.E_im_str, "Im E grid start:stop:count");

    auto* pm = app.add_subcommand("premodular", "pre-modular forms: eval, boundary-scan, zero-find, heatmap");
    add_common(pm);
    pm->add_option("--op", c.op)->check(CLI::IsMember({"eval", "boundary-scan", "zero-find", "heatmap"}));
    pm->add_option("--n", c.index, "index 1..4")->check(CLI::Range(1, 4));
    pm->add_option("--r", c.r);
    pm->add_option("--s", c.s);
    pm->add_option("--tau", c.tau_str);
    pm->add_option("--seed-tau", c.seed_tau, "single Newton seed (default: 5x5 lattice in F0)");
    pm->add_option("--random-seeds", c.random_seeds, "extra uniformly drawn seeds")->check(CLI::NonNegativeNumber);
    pm->add_option("--seed", c.seed, "rng seed for --random-seeds");
    pm->add_option("--nr", c.nr)->check(CLI::PositiveNumber);
    pm->add_option("--ns", c.ns)->check(CLI::PositiveNumber);
    pm->add_option("--per-piece", c.per_piece)->check(CLI::Range(2, 100000));
    pm->add_option("--h-min", c.h_min)->check(CLI::PositiveNumber);
    pm->add_option("--h-max", c.h_max)->check(CLI::PositiveNumber);
    pm->add_option("--floor", c.floor)->check(CLI::PositiveNumber);
    pm->add_option("--tau-re", c.tau_re_grid, "heatmap Re tau grid");
    pm->add_option("--tau-im", c.tau_im_grid, "heatmap Im tau grid");
    pm->add_option("--newton-h", c.zopt.h)->check(CLI::PositiveNumber);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        error_json(err, "usage", e.what(), kUsage);
        return kUsage;
    }
    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

    try {
        if (!c.n_str.empty()) {
            std::array<int, 4> n{};
            std::stringstream ss(c.n_str);
            std::string tok;
            int k = 0;
            while (std::getline(ss, tok, ',')) {
                if (k >= 4) throw DomainError("--n needs exactly four entries");
                const double v = to_double(tok);
                if (v != std::floor(v)) throw DomainError("--n entries must be integers");
                n[static_cast<std::size_t>(k++)] = static_cast<int>(v);
            }
            if (k != 4) throw DomainError("--n needs exactly four entries");
            c.n = n;
            (void)MultiplicityTuple(n);
        }
        if (c.command == "qpoly") return cmd_qpoly(c, out);
        if (c.command == "scan") return cmd_scan(c, out);
        if (c.command == "bands") return cmd_bands(c, out);
        if (c.command == "dual") return cmd_dual(c, out);
        if (c.command == "unitary") return cmd_unitary(c, out);
        if (c.command == "premodular") return cmd_premodular(c, out);
    } catch (const DomainError& e) {
        error_json(err, "domain", e.what(), kUsage);
        return kUsage;
    } catch (const PoleError& e) {
        error_json(err, "pole", e.what(), kUsage);
        return kUsage;
    } catch (const AssertionFailure& e) {
        error_json(err, "assertion", e.what(), kAssertion);
        return kAssertion;
    } catch (const ConvergenceError& e) {
        error_json(err, "convergence", e.what(), kNonConvergence);
        return kNonConvergence;
    }
    error_json(err, "usage", "unknown command", kUsage);
    return kUsage;
}

} // namespace tvgap::cli
