// scatterkern — command-line front end: dataset validation, derived
// scattering objects, weighted reproducing kernels, translation asymptotics,
// node/transfer-matrix checks, half-line transfer/Weyl checks, dyadic weight
// scans, and the golden closed-form battery.

#include "scatterkern/a2.hpp"
#include "scatterkern/appendix.hpp"
#include "scatterkern/asymptotics.hpp"
#include "scatterkern/canonical.hpp"
#include "scatterkern/io.hpp"
#include "scatterkern/sturm.hpp"
#include "scatterkern/unitary_node.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace sk;
using nlohmann::json;

namespace {

cplx parse_point(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected RE,IM, got '" + s + "'");
    return cplx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

std::pair<double, double> parse_interval(const std::string& s) {
    auto colon = s.find(':', 1); // skip a possible leading minus sign
    if (colon == std::string::npos)
        throw CLI::ValidationError("expected lo:hi, got '" + s + "'");
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
}

std::vector<double> parse_range(const std::string& s) {
    auto c2 = s.rfind(':');
    auto c1 = s.rfind(':', c2 - 1);
    if (c1 == std::string::npos || c2 == std::string::npos || c1 == c2)
        throw CLI::ValidationError("expected a:b:n, got '" + s + "'");
    double a = std::stod(s.substr(0, c1));
    double b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    int n = std::stoi(s.substr(c2 + 1));
    if (n < 2) throw CLI::ValidationError("range needs at least 2 points");
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

Potential parse_potential(const std::string& s) {
    auto colon = s.find(':');
    std::string name = (colon == std::string::npos) ? s : s.substr(0, colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::string rest = s.substr(colon + 1);
        size_t pos = 0;
        while (pos < rest.size()) {
            size_t next = rest.find(',', pos);
            std::string item =
                rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("expected k=v in potential params");
            params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
    }
    return make_potential(name, params);
}

void write_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cout << j.dump(2) << std::endl;
    } else {
        std::ofstream f(path);
        f << j.dump(2) << "\n";
    }
}

std::string profile_from_env() {
    const char* env = std::getenv("SCATTERKERN_PROFILE");
    return env ? std::string(env) : std::string("default");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattering-data kernel toolbox"};
    app.require_subcommand(1);

    std::string data_path, out_path, profile_name = profile_from_env();
    app.add_option("--profile", profile_name, "grid profile: default|fast|hires");

    auto* cmd_validate = app.add_subcommand("validate", "admissibility report for a dataset");
    cmd_validate->add_option("--data", data_path, "input JSON")->required();
    cmd_validate->add_option("--out", out_path, "report JSON path");

    auto* cmd_derive = app.add_subcommand("derive", "derived scattering objects");
    cmd_derive->add_option("--data", data_path, "input JSON")->required();
    cmd_derive->add_option("--out", out_path, "report JSON path");

    std::string flavor_str = "h2", mu_str = "0,1";
    double x_par = 0.0;
    int basis_n = 0;
    auto* cmd_kernel = app.add_subcommand("kernel", "weighted reproducing kernel at a point");
    cmd_kernel->add_option("--data", data_path)->required();
    cmd_kernel->add_option("--flavor", flavor_str, "h2|h2hat");
    cmd_kernel->add_option("--x", x_par, "translation parameter");
    cmd_kernel->add_option("--mu", mu_str, "center RE,IM")->required();
    cmd_kernel->add_option("--basis", basis_n, "basis order override");
    cmd_kernel->add_option("--out", out_path);

    std::string theorem = "t2", l0_str = "1,1";
    auto* cmd_asym = app.add_subcommand("asymptotics", "translation traces");
    cmd_asym->add_option("--data", data_path)->required();
    cmd_asym->add_option("--lambda0", l0_str, "RE,IM");
    cmd_asym->add_option("--theorem", theorem, "t2|t1i|t1ii|c11|c12");
    cmd_asym->add_option("--flavor", flavor_str, "h2|h2hat (t2 only)");
    cmd_asym->add_option("--out", out_path, "trace CSV path")->required();

    std::string check = "wronskian";
    auto* cmd_node = app.add_subcommand("node", "rank-one node checks");
    cmd_node->add_option("--data", data_path)->required();
    cmd_node->add_option("--lambda0", l0_str, "RE,IM");
    cmd_node->add_option("--check", check, "wronskian|kernel|theta-iso");
    cmd_node->add_option("--out", out_path);

    std::string xgrid = "0.2:1.2:6", emit = "coeffs.csv";
    auto* cmd_canon = app.add_subcommand("canonical", "transfer-matrix chain and coefficients");
    cmd_canon->add_option("--data", data_path)->required();
    cmd_canon->add_option("--x-grid", xgrid, "a:b:n");
    cmd_canon->add_option("--emit", emit, "coeffs.csv path or chain.json path");

    std::string q_str = "zero";
    double x0 = 1.0;
    auto* cmd_sturm = app.add_subcommand("sturm", "half-line transfer/Weyl checks");
    cmd_sturm->add_option("--q", q_str, "potential name:params (zero, bump:c=2,center=3)");
    cmd_sturm->add_option("--lambda0", l0_str, "RE,IM");
    cmd_sturm->add_option("--x0", x0, "interval endpoint");
    cmd_sturm->add_option("--check", check, "m9|factorization|wronskian");
    cmd_sturm->add_option("--out", out_path);

    std::string window = "-8:8";
    int depth = 10;
    auto* cmd_a2 = app.add_subcommand("a2", "dyadic weight-condition scan");
    cmd_a2->add_option("--data", data_path)->required();
    cmd_a2->add_option("--window", window, "lo:hi");
    cmd_a2->add_option("--depth", depth, "dyadic depth");
    cmd_a2->add_option("--out", out_path);

    auto* cmd_golden = app.add_subcommand("golden", "closed-form battery");
    cmd_golden->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunManifest manifest;
    for (int i = 0; i < argc; ++i)
        manifest.command += std::string(argv[i]) + (i + 1 < argc ? " " : "");

    try {
        if (*cmd_validate) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            manifest.operations = {"validate"};
            AdmissibilityReport r = validate(in.data, in.profile);
            json j{{"label", in.data.label},
                   {"symmetry_residual", r.symmetry_residual},
                   {"contraction_excess", r.contraction_excess},
                   {"szego_value", r.szego.value},
                   {"szego_finite", r.szego.finite},
                   {"blaschke_sum_small", r.blaschke_sum_small},
                   {"blaschke_sum_large", r.blaschke_sum_large},
                   {"masses_distinct", r.masses_distinct},
                   {"pass", r.pass()}};
            write_json(out_path, j);
            manifest.verdicts = {{"admissible", r.pass()}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return r.pass() ? 0 : 1;
        }

        if (*cmd_derive) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            manifest.operations = {"validate", "derive"};
            DerivedData d = derive(in.data, in.profile);
            const RealGrid& g = in.profile.base_grid();
            double worst_unit = 0.0, worst_sym = 0.0;
            for (size_t i = 0; i < g.size(); i += 5) {
                double t = g.nodes[i];
                cplx sm = d.s_minus(t), sv = d.s(t), sp = d.data.s_plus(t);
                worst_unit = std::max(worst_unit, std::abs(abs2(sm) + abs2(sv) - 1.0));
                worst_unit = std::max(worst_unit, std::abs(abs2(sv) + abs2(sp) - 1.0));
                worst_unit =
                    std::max(worst_unit, std::abs(sm * std::conj(sv) + sv * std::conj(sp)));
                worst_sym = std::max(worst_sym, std::abs(std::conj(d.s(-t)) - sv));
            }
            json masses = json::array();
            for (size_t k = 0; k < d.masses_minus.size(); ++k)
                masses.push_back({{"lambda",
                                   {d.masses_minus[k].lambda.real(),
                                    d.masses_minus[k].lambda.imag()}},
                                  {"weight_minus", d.masses_minus[k].weight},
                                  {"inv_s_deriv",
                                   {d.inv_s_deriv[k].real(), d.inv_s_deriv[k].imag()}}});
            cplx sei = d.s_e(cplx(0.0, 1.0));
            json j{{"label", in.data.label},
                   {"s_e_at_i", {sei.real(), sei.imag()}},
                   {"unitarity_residual", worst_unit},
                   {"reflection_symmetry_residual", worst_sym},
                   {"masses_minus", masses}};
            write_json(out_path, j);
            bool ok = worst_unit < 1e-8 && worst_sym < 1e-8;
            manifest.verdicts = {{"unitarity", ok}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return ok ? 0 : 1;
        }

        if (*cmd_kernel) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            manifest.operations = {"derive", "kernel_compute"};
            auto d = std::make_shared<DerivedData>(derive(in.data, in.profile));
            cplx mu = parse_point(mu_str);
            int order = basis_n > 0 ? basis_n : in.profile.basis_order;
            Flavor fl = (flavor_str == "h2hat") ? Flavor::H2Hat : Flavor::H2;
            FMData view = make_view(*d, Side::Plus, x_par);
            KernelField k = kernel_compute(fl, view, mu, order);
            cplx probe_pt = mu + cplx(0.1, 0.2);
            KernelField probe = kernel_compute(fl, view, probe_pt, order);
            double herm = std::abs(k.eval(probe_pt) - std::conj(probe.eval(mu)));
            json j{{"label", in.data.label},
                   {"flavor", flavor_str},
                   {"x", x_par},
                   {"mu", {mu.real(), mu.imag()}},
                   {"diag", k.diag()},
                   {"translated_diag", k.translated_diag()},
                   {"gram_cond", k.gram_cond},
                   {"ridge_used", k.ridge_used},
                   {"hermitian_residual", herm},
                   {"basis_order", order}};
            write_json(out_path, j);
            bool ok = k.diag() > 0 && herm < 1e-5;
            manifest.verdicts = {{"kernel", ok}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return ok ? 0 : 1;
        }

        if (*cmd_asym) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            auto d = std::make_shared<DerivedData>(derive(in.data, in.profile));
            cplx l0 = parse_point(l0_str);
            int order = in.profile.basis_order;
            AsymptoticsRun run;
            if (theorem == "t2") {
                manifest.operations = {"run_theorem2"};
                run = run_theorem2(*d, l0, forward_schedule(),
                                   flavor_str == "h2hat" ? Flavor::H2Hat : Flavor::H2, order);
            } else if (theorem == "t1i") {
                manifest.operations = {"run_scattering_identities"};
                run = run_scattering_identities(*d, l0, forward_schedule(),
                                                ScatteringRelation::ForwardPlus, order);
            } else if (theorem == "t1ii" || theorem == "c12") {
                manifest.operations = {"run_mass_blowup"};
                run = run_mass_blowup(*d, 0, backward_schedule(), order);
            } else if (theorem == "c11") {
                manifest.operations = {"run_scattering_identities"};
                run = run_scattering_identities(*d, l0, backward_schedule(),
                                                ScatteringRelation::ForwardMinus, order);
            } else {
                throw CLI::ValidationError("unknown --theorem " + theorem);
            }
            CsvWriter csv(out_path, {"x", "quantity", "residual", "epsilon_used", "gram_cond"});
            for (const auto& r : run.records)
                csv.row({r.x, r.value, r.residual, r.epsilon_used, r.gram_cond});
            bool ok = run.all_solved() &&
                      (run.records.empty() ||
                       run.records.back().residual < in.profile.tol.asym * 10.0 + 1e-9);
            manifest.outputs = {out_path};
            manifest.verdicts = {{run.quantity + "_converged", ok}};
            manifest.write(out_path + ".manifest.json");
            return ok ? 0 : 1;
        }

        if (*cmd_node) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            auto d = std::make_shared<DerivedData>(derive(in.data, in.profile));
            cplx l0 = parse_point(l0_str);
            int order = in.profile.basis_order;
            NodeBasis nb(d, l0, order);
            json j{{"label", in.data.label}, {"lambda0", {l0.real(), l0.imag()}}};
            bool ok = true;
            if (check == "wronskian") {
                manifest.operations = {"node_basis", "wronskian_check"};
                double worst_b = 0.0, worst_i = 0.0;
                for (double mu : {0.5, 1.0, 2.0, 4.0}) {
                    worst_b = std::max(worst_b, wronskian_boundary(nb, mu).residual);
                    worst_i =
                        std::max(worst_i, wronskian_interior(nb, cplx(mu, 0.7)).residual);
                }
                j["boundary_residual"] = worst_b;
                j["interior_residual"] = worst_i;
                ok = worst_b < 1e-4 && worst_i < 1e-4;
            } else if (check == "kernel") {
                manifest.operations = {"node_basis", "kernel_via_theta", "kernel_compute"};
                FMData plus = make_view(*d, Side::Plus, 0.0);
                double worst = 0.0;
                for (cplx z : {cplx(1.0, 2.0), cplx(-0.5, 0.8)}) {
                    KernelField k = kernel_compute(Flavor::H2, plus, z, order);
                    for (cplx w : {cplx(0.3, 1.0), cplx(2.0, 0.5)})
                        worst = std::max(worst,
                                         std::abs(kernel_via_theta(nb, w, z) - k.eval(w)));
                }
                j["kernel_residual"] = worst;
                ok = worst < 1e-4;
            } else if (check == "theta-iso") {
                manifest.operations = {"node_basis", "theta_scattering_data"};
                ThetaData td = theta_scattering_data(nb);
                j["isometry_residual"] = td.isometry_residual;
                j["contraction_excess"] = td.contraction_excess;
                j["min_density"] = td.min_density;
                ok = td.isometry_residual < 1e-4 && td.contraction_excess < 1e-6 &&
                     td.min_density >= 0.0;
            } else {
                throw CLI::ValidationError("unknown --check " + check);
            }
            j["pass"] = ok;
            write_json(out_path, j);
            manifest.verdicts = {{check, ok}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return ok ? 0 : 1;
        }

        if (*cmd_canon) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            auto d = std::make_shared<DerivedData>(derive(in.data, in.profile));
            cplx l0 = std::sqrt(cplx(0.0, 1.0)); // normalization point λ₀² = i
            std::vector<double> xs = parse_range(xgrid);
            int order = in.profile.basis_order;
            bool as_json = emit.size() > 5 && emit.substr(emit.size() - 5) == ".json";
            bool ok = true;
            if (as_json) {
                manifest.operations = {"transfer_matrix"};
                json chain = json::array();
                for (double x : xs) {
                    CanonicalNode node(d, l0, x, order);
                    Eigen::Matrix2cd A = node.transfer(cplx(0.9, 0.0));
                    chain.push_back({{"x", x},
                                     {"A",
                                      {{A(0, 0).real(), A(0, 0).imag()},
                                       {A(0, 1).real(), A(0, 1).imag()},
                                       {A(1, 0).real(), A(1, 0).imag()},
                                       {A(1, 1).real(), A(1, 1).imag()}}}});
                }
                write_json(emit, json{{"label", in.data.label}, {"chain", chain}});
            } else {
                manifest.operations = {"extract_coefficients"};
                CsvWriter csv(emit, {"t", "alpha", "re_beta", "im_beta"});
                for (double x : xs) {
                    GaugeCoefficients c = extract_coefficients(d, l0, x, order);
                    ok = ok && c.alpha > 0.0 &&
                         std::abs(std::abs(c.beta) - c.alpha) < 0.05 * c.alpha;
                    csv.row({x, c.alpha, c.beta.real(), c.beta.imag()});
                }
            }
            manifest.outputs = {emit};
            manifest.verdicts = {{"coefficients", ok}};
            manifest.write(emit + ".manifest.json");
            return ok ? 0 : 1;
        }

        if (*cmd_sturm) {
            Potential q = parse_potential(q_str);
            manifest.dataset_label = "potential:" + q.name;
            manifest.profile_hash = GridProfile::named(profile_name).hash();
            cplx l0 = parse_point(l0_str);
            json j{{"potential", q.name}, {"x0", x0}};
            bool ok = true;
            if (check == "m9") {
                manifest.operations = {"m9_check"};
                IdentityM9Report rep = m9_check(q, l0, x0);
                j["lhs"] = {rep.lhs.real(), rep.lhs.imag()};
                j["rhs"] = {rep.rhs.real(), rep.rhs.imag()};
                j["relative_residual"] = rep.relative_residual;
                ok = rep.relative_residual < 1e-2;
            } else if (check == "factorization") {
                manifest.operations = {"node_quantities"};
                WeylData w = node_quantities(q, l0, x0);
                j["tau"] = w.tau;
                j["a"] = {w.a.real(), w.a.imag()};
                j["normalization_offdiag"] = w.normalization_offdiag;
                j["triangular_residual"] = w.triangular_residual;
                j["delta_det"] = w.delta_det;
                ok = w.normalization_offdiag < 1e-6 && w.triangular_residual < 1e-6 &&
                     w.delta_det > 1e-12;
            } else if (check == "wronskian") {
                manifest.operations = {"integrate_B"};
                SLTransfer T = integrate_B(q, l0, x0);
                j["det_defect"] = T.det_defect;
                j["conservation_residual"] = T.conservation_residual;
                ok = T.det_defect < 1e-8 && T.conservation_residual < 1e-6;
            } else {
                throw CLI::ValidationError("unknown --check " + check);
            }
            j["pass"] = ok;
            write_json(out_path, j);
            manifest.verdicts = {{check, ok}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return ok ? 0 : 1;
        }

        if (*cmd_a2) {
            LoadedInput in = load_input(data_path, profile_name);
            manifest.dataset_label = in.data.label;
            manifest.profile_hash = in.profile.hash();
            manifest.operations = {"a2_scalar_check", "a2_matrix_check"};
            auto [lo, hi] = parse_interval(window);
            auto sfun = [&](double t) { return in.data.s_plus(cplx(t, 0.0)); };
            A2Report scalar = a2_scalar_check(sfun, lo, hi, depth);
            A2Report matrix = a2_matrix_check(sfun, lo, hi, depth);
            json j{{"label", in.data.label},
                   {"window", {lo, hi}},
                   {"depth", depth},
                   {"scalar_supremum", scalar.supremum},
                   {"scalar_finite", scalar.finite},
                   {"scalar_witness", {scalar.witness.a, scalar.witness.b}},
                   {"matrix_supremum", matrix.supremum},
                   {"matrix_finite", matrix.finite},
                   {"sup_by_depth", scalar.sup_by_depth}};
            write_json(out_path, j);
            bool agree = scalar.finite == matrix.finite;
            manifest.verdicts = {{"verdicts_agree", agree}};
            if (!out_path.empty()) {
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return agree ? 0 : 1;
        }

        if (*cmd_golden) {
            manifest.dataset_label = "appendix1";
            GridProfile profile = GridProfile::named(profile_name);
            manifest.profile_hash = profile.hash();
            manifest.operations = {"appendix1_golden"};
            GoldenLedger ledger = appendix1_golden(profile);
            json items = json::array();
            for (const auto& item : ledger.items) {
                std::printf("[%s] %-38s measured %.3e  tol %.1e\n",
                            item.pass() ? "PASS" : "FAIL", item.name.c_str(), item.measured,
                            item.tolerance);
                items.push_back({{"name", item.name},
                                 {"measured", item.measured},
                                 {"tolerance", item.tolerance},
                                 {"pass", item.pass()}});
                manifest.verdicts.push_back({item.name, item.pass()});
            }
            if (!out_path.empty()) {
                write_json(out_path, json{{"items", items}, {"pass", ledger.all_pass()}});
                manifest.outputs = {out_path};
                manifest.write(out_path + ".manifest.json");
            }
            return ledger.all_pass() ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        if (!out_path.empty()) write_json(out_path, json{{"error", e.what()}});
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
