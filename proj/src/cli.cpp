#include "metrise/cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metrise/covariants.hpp"
#include "metrise/errors.hpp"
#include "metrise/io.hpp"
#include "metrise/metrisability.hpp"
#include "metrise/parse.hpp"
#include "metrise/rep.hpp"
#include "metrise/schemes.hpp"

namespace metrise {

namespace {

using nlohmann::json;

struct Report {
    std::vector<std::string> lines;
    json j = json::object();

    void line(const std::string& s) { lines.push_back(s); }

    void tensor(const std::string& name, const Tensor& t) {
        json comps = json::array();
        bool any = false;
        for (std::size_t lin = 0; lin < t.size(); ++lin) {
            if (t.at(lin).is_zero()) continue;
            auto idx = t.decode(lin);
            std::ostringstream os;
            os << name << "[";
            json jidx = json::array();
            for (std::size_t i = 0; i < idx.size(); ++i) {
                os << (i ? "," : "") << idx[i] + 1;
                jidx.push_back(idx[i] + 1);
            }
            os << "] = " << t.at(lin).str();
            lines.push_back(os.str());
            comps.push_back({{"indices", jidx}, {"value", t.at(lin).str()}});
            any = true;
        }
        if (!any) lines.push_back(name + " = 0");
        j["tensors"][name] = {{"components", comps}, {"weight", to_string(t.weight())}};
    }

    void verdict(const std::string& name, bool zero, const std::string& witness = "") {
        std::string v = zero ? "zero" : "nonzero";
        if (!zero && !witness.empty()) v += " (" + witness + ")";
        lines.push_back(name + ": " + v);
        j["verdicts"][name] = zero ? "zero" : "nonzero";
        if (!zero && !witness.empty()) j["witness"][name] = witness;
    }

    void constant(const std::string& name, const Rat& value) {
        lines.push_back(name + " = " + to_string(value));
        j["constants"][name] = to_string(value);
    }

    void print(std::ostream& out, bool as_json) const {
        if (as_json) {
            out << j.dump(2) << "\n";
        } else {
            for (const auto& l : lines) out << l << "\n";
        }
    }
};

std::string first_nonzero(const Tensor& t) {
    for (std::size_t lin = 0; lin < t.size(); ++lin) {
        if (t.at(lin).is_zero()) continue;
        auto idx = t.decode(lin);
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
        os << "] = " << t.at(lin).str();
        return os.str();
    }
    return "";
}

std::map<std::string, Rat> parse_point(const std::string& text, const std::array<std::string, 3>& coords) {
    std::map<std::string, Rat> pt;
    for (const auto& c : coords) pt[c] = Rat(0);
    if (text.empty()) return pt;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw input_error("point assignment '" + item + "' is not name=value");
        std::string name = item.substr(0, eq);
        Poly val = parse_poly(item.substr(eq + 1), Poly::empty_vars());
        pt[name] = val.constant_value();
    }
    return pt;
}

void cmd_curvature(const std::string& file, Report& rep) {
    StructureFile sf = load_structure(file);
    ProjectiveStructure ps = structure_connection(sf);
    CurvatureDecomposition dec = curvature(ps);
    rep.tensor("R", dec.riemann);
    rep.tensor("P", dec.schouten);
    rep.tensor("beta", dec.beta);
    rep.tensor("W", dec.weyl);
    rep.tensor("V", v_from_weyl(dec.weyl).v);
}

void cmd_obstructions(const std::string& file, std::string set, const std::string& method,
                      Report& rep) {
    StructureFile sf = load_structure(file);
    WeylV v = structure_weyl_v(sf);
    std::set<std::string> want;
    {
        std::stringstream ss(set);
        std::string item;
        while (std::getline(ss, item, ',')) want.insert(item);
    }
    if (want.count("all")) want = {"q", "s", "t", "theorem2"};
    bool all_zero = true;
    auto report_tensor = [&](const std::string& name, const Tensor& t) {
        rep.verdict(name, t.is_zero(), first_nonzero(t));
        rep.tensor(name, t);
        if (!t.is_zero()) all_zero = false;
    };
    for (const auto& name : want) {
        if (name == "q") {
            report_tensor("Q", named_covariant(Cov::Q, v));
        } else if (name == "s") {
            report_tensor("S", named_covariant(Cov::S, v));
        } else if (name == "t") {
            report_tensor("T", t_tensor(v, t_method_from_name(method)));
            rep.constant("calibration combination/determinant", Rat(5832));
            rep.constant("calibration traces/determinant", Rat(-144));
        } else if (name == "theorem2") {
            auto tens = theorem2_tensors(v);
            auto names = theorem2_names();
            for (std::size_t i = 0; i < tens.size(); ++i) report_tensor(names[i], tens[i]);
        } else {
            throw input_error("unknown obstruction set entry '" + name + "'");
        }
    }
    if (all_zero)
        rep.line("note: vanishing obstructions do not imply metrisability");
}

void cmd_constraints(const std::string& file, const std::string& at, Report& rep) {
    StructureFile sf = load_structure(file);
    WeylV v = structure_weyl_v(sf);
    ConstraintMap cm = constraint_map(v);
    std::map<std::string, Rat> pt = parse_point(at, sf.coords);
    KernelResult k = constraint_kernel(cm, pt);
    rep.line("kernel dimension = " + std::to_string(k.dim));
    rep.j["kernel_dimension"] = k.dim;
    static const char* basis_names[6] = {"11", "12", "13", "22", "23", "33"};
    json jbasis = json::array();
    for (const auto& vec : k.basis) {
        std::ostringstream os;
        os << "kernel basis vector:";
        json jvec = json::array();
        for (std::size_t i = 0; i < 6; ++i) {
            jvec.push_back(to_string(vec[i]));
            if (vec[i] != 0) os << " sigma^{" << basis_names[i] << "} = " << to_string(vec[i]);
        }
        jbasis.push_back(jvec);
        rep.line(os.str());
    }
    rep.j["kernel_basis"] = jbasis;
}

void cmd_verify_sigma(const std::string& file, const std::string& sigma_file, Report& rep) {
    StructureFile sf = load_structure(file);
    StructureFile ssf = load_structure(sigma_file);
    if (!ssf.sigma) throw input_error(sigma_file + ": expected kind sigma_candidate");
    ProjectiveStructure ps = structure_connection(sf);
    const Tensor& sigma = *ssf.sigma;

    Tensor res = metrisability_residual(ps, sigma);
    rep.verdict("metrisability residual", res.is_zero(), first_nonzero(res));
    Tensor con = constraint_residual(weyl_v_of(ps), sigma);
    rep.verdict("constraint residual", con.is_zero(), first_nonzero(con));
    Tensor det = det_sigma(sigma);
    rep.line("det sigma = " + det.at(0).str());
    rep.j["det_sigma"] = det.at(0).str();
    Tensor pair = pairing(ps, sigma, det);
    rep.verdict("pairing with det sigma", pair.is_zero(), first_nonzero(pair));
    if (!det.at(0).is_zero()) {
        rep.tensor("metric g^{ab} = (det sigma) sigma^{ab}", metric_from_sigma(sigma));
    } else {
        rep.line("det sigma = 0: no metric arises from this solution");
    }
}

void cmd_fels(const std::string& file, Report& rep) {
    StructureFile sf = load_structure(file);
    if (!sf.ode) throw input_error(file + ": expected kind ode_system");
    FelsResidual fr = fels_residual(*sf.ode);
    rep.verdict("fels residual", fr.is_zero());
    if (!fr.is_zero()) {
        for (int i = 0; i < 2; ++i)
            for (int jj = 0; jj < 2; ++jj)
                for (int k = jj; k < 2; ++k)
                    for (int l = k; l < 2; ++l)
                        if (!fr.at(i, jj, k, l).is_zero()) {
                            std::ostringstream os;
                            os << "S^" << i + 2 << "_(" << jj + 2 << k + 2 << l + 2
                               << ") = " << fr.at(i, jj, k, l).str();
                            rep.line(os.str());
                        }
    }
}

void cmd_to_ode(const std::string& file, Report& rep) {
    StructureFile sf = load_structure(file);
    ProjectiveStructure ps = structure_connection(sf);
    ODESystem sys = system_from_connection(ps);
    rep.line("F2 = " + sys.f2.str());
    rep.line("F3 = " + sys.f3.str());
    rep.j["F2"] = sys.f2.str();
    rep.j["F3"] = sys.f3.str();
}

void cmd_from_ode(const std::string& file, Report& rep) {
    StructureFile sf = load_structure(file);
    if (!sf.ode) throw input_error(file + ": expected kind ode_system");
    ProjectiveStructure ps = connection_from_system(*sf.ode);
    rep.tensor("Gamma", ps.gamma);
}

void cmd_rep(const std::string& mode, int k, int a, int b, Report& rep) {
    if (mode == "sym") {
        Sl3Decomposition d = sl3_sym_decompose(k, {a, b});
        std::ostringstream os;
        bool first = true;
        for (const auto& [w, m] : d) {
            if (!first) os << " + ";
            os << m << "x[" << w[0] << "," << w[1] << "]";
            first = false;
        }
        rep.line(os.str());
        json jd = json::array();
        for (const auto& [w, m] : d)
            jd.push_back({{"weight", {w[0], w[1]}}, {"multiplicity", m}});
        rep.j["decomposition"] = jd;
    } else if (mode == "branch") {
        auto d = sl2_branch({a, b});
        std::ostringstream os;
        bool first = true;
        for (const auto& [n, m] : d) {
            if (!first) os << " + ";
            os << m << "x[" << n << "]";
            first = false;
        }
        rep.line(os.str());
        json jd = json::array();
        for (const auto& [n, m] : d) jd.push_back({{"weight", n}, {"multiplicity", m}});
        rep.j["branching"] = jd;
    } else {
        throw input_error("rep mode must be 'sym' or 'branch'");
    }
}

void cmd_span(int degree, Report& rep) {
    SpanReport r = span_analysis(degree);
    rep.line("degree " + std::to_string(r.degree) + ": " + std::to_string(r.scheme_count) +
             " canonical schemes, span " + std::to_string(r.span_dim) + ", vanishing " +
             std::to_string(r.vanishing_dim));
    auto schemes = enumerate_schemes(degree);
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        std::ostringstream os;
        os << "scheme" << i << ": lower of vertex v -> (vertex, slot):";
        for (std::size_t vtx = 0; vtx < schemes[i].matching.size(); ++vtx)
            os << " " << vtx << "->(" << schemes[i].matching[vtx].first << ","
               << schemes[i].matching[vtx].second << ")";
        rep.line(os.str());
    }
    rep.line(std::string("vanishing basis symbolically certified on the metric family: ") +
             (r.vanishing_certified ? "yes" : "NO"));
    rep.line("multiplicity of (0," + std::to_string(r.degree) + ") in Sym^" +
             std::to_string(r.degree) + " of the V-module = " + std::to_string(r.rep_multiplicity) +
             (r.complete ? " (bounds meet: span is complete)" : " (MISMATCH with the span rank)"));
    rep.j["rep_multiplicity"] = r.rep_multiplicity;
    rep.j["complete"] = r.complete;
    rep.j["degree"] = r.degree;
    rep.j["scheme_count"] = r.scheme_count;
    rep.j["span_dim"] = r.span_dim;
    rep.j["vanishing_dim"] = r.vanishing_dim;
    rep.j["vanishing_certified"] = r.vanishing_certified;
    json jb = json::array();
    for (const auto& combo : r.vanishing_basis) {
        std::ostringstream os;
        os << "vanishing combination:";
        json jc = json::array();
        for (std::size_t i = 0; i < combo.size(); ++i) {
            jc.push_back(to_string(combo[i]));
            if (combo[i] != 0) os << " " << to_string(combo[i]) << "*scheme" << i;
        }
        rep.line(os.str());
        jb.push_back(jc);
    }
    rep.j["vanishing_basis"] = jb;
    rep.line("seeds: generic " + std::to_string(r.generic_seed) + ", metric " +
             std::to_string(r.metric_seed));
}

void cmd_metric_vanishing(const std::string& expr, Report& rep) {
    VanishingVerdict v = check_metric_vanishing(expr);
    rep.line(std::string("vanishes on the metric family: ") +
             (v.vanishes_on_metric_family ? "yes" : "no"));
    rep.j["vanishes_on_metric_family"] = v.vanishes_on_metric_family;
    rep.j["witness_found"] = v.witness_found;
    if (v.witness_found)
        rep.line("generic witness: " + v.witness);
    else
        rep.line("no generic witness found (identically zero)");
    if (v.witness_found) rep.j["witness"] = v.witness;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact metrisability obstructions for 3-dimensional projective structures"};
    app.require_subcommand(1);
    app.fallthrough(true);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable report");

    std::string file, sigma_file, set = "all", method = "combination", at, expr, mode;
    int degree = 6, k = 0, wa = 0, wb = 0;

    auto* c_curv = app.add_subcommand("curvature", "curvature decomposition and V");
    c_curv->add_option("file", file)->required();

    auto* c_obs = app.add_subcommand("obstructions", "evaluate the obstruction tensors");
    c_obs->add_option("file", file)->required();
    c_obs->add_option("--set", set, "comma list of q,s,t,theorem2,all");
    c_obs->add_option("--method", method, "T route: combination|determinant|traces");

    auto* c_con = app.add_subcommand("constraints", "pointwise kernel of the Xi matrix");
    c_con->add_option("file", file)->required();
    c_con->add_option("--at", at, "evaluation point, e.g. x1=1,x2=0");

    auto* c_ver = app.add_subcommand("verify-sigma", "check a metrisability candidate");
    c_ver->add_option("file", file)->required();
    c_ver->add_option("--sigma", sigma_file)->required();

    auto* c_fels = app.add_subcommand("fels", "fels conditions for an ODE system");
    c_fels->add_option("file", file)->required();

    auto* c_to = app.add_subcommand("to-ode", "connection to second-order system");
    c_to->add_option("file", file)->required();

    auto* c_from = app.add_subcommand("from-ode", "system to gauge-fixed connection");
    c_from->add_option("file", file)->required();

    auto* c_rep = app.add_subcommand("rep", "sl3 symmetric powers / sl2 branching");
    c_rep->add_option("mode", mode, "sym|branch")->required();
    c_rep->add_option("k", k, "power (sym) or first label (branch)")->required();
    c_rep->add_option("a", wa)->required();
    c_rep->add_option("b", wb, "second label (sym only)");

    auto* c_span = app.add_subcommand("span", "contraction-scheme span analysis");
    c_span->add_option("--degree", degree)->required();

    auto* c_mv = app.add_subcommand("metric-vanishing", "test a covariant combination");
    c_mv->add_option("--expr", expr)->required();

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    Report rep;
    rep.j["command"] = args;
    std::ostringstream echo;
    echo << "command:";
    for (const auto& a : args) echo << " " << a;
    rep.line(echo.str());

    try {
        if (c_curv->parsed()) cmd_curvature(file, rep);
        else if (c_obs->parsed()) cmd_obstructions(file, set, method, rep);
        else if (c_con->parsed()) cmd_constraints(file, at, rep);
        else if (c_ver->parsed()) cmd_verify_sigma(file, sigma_file, rep);
        else if (c_fels->parsed()) cmd_fels(file, rep);
        else if (c_to->parsed()) cmd_to_ode(file, rep);
        else if (c_from->parsed()) cmd_from_ode(file, rep);
        else if (c_rep->parsed()) {
            // rep sym K A B takes three integers, rep branch A B two
            if (mode == "sym" && !c_rep->count("b"))
                throw input_error("rep sym needs a power and two weight labels");
            if (mode == "branch" && c_rep->count("b"))
                throw input_error("rep branch takes exactly two weight labels");
            if (mode == "branch") cmd_rep(mode, 1, k, wa, rep);
            else cmd_rep(mode, k, wa, wb, rep);
        }
        else if (c_span->parsed()) cmd_span(degree, rep);
        else if (c_mv->parsed()) cmd_metric_vanishing(expr, rep);
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        err << "input error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        err << "precondition failure: " << e.what() << "\n";
        return 3;
    } catch (const internal_error& e) {
        err << "internal assertion: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }

    rep.print(out, as_json);
    return 0;
}

} // namespace metrise
