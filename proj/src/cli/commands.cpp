#include "dirac/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dirac/cli/output.hpp"
#include "dirac/errors.hpp"
#include "dirac/expansion/projector.hpp"
#include "dirac/parallel.hpp"

namespace dirac::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kBandFactor = 4.0;
constexpr double kTrendSlack = 0.2;

class Writer {
public:
    explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

    void put(const std::string& name, std::string_view content) {
        write_atomic(dir_ / name, content);
        written_.push_back(dir_ / name);
    }
    void put_json(const std::string& name, const json& j) { put(name, j.dump(2) + "\n"); }

    std::vector<fs::path> files() const { return written_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

// nlohmann writes null for non-finite doubles; keep the sentinel visible.
json real_json(double v) { return std::isfinite(v) ? json(v) : json(number(v)); }

GridPtr grid_for(const ExperimentConfig& cfg, Complex lambda) {
    if (cfg.panels > 0) return std::make_shared<const Grid>(cfg.panels, cfg.nodes_per_panel);
    return Grid::for_spectral_bound(lambda.real(), lambda.imag(), cfg.nodes_per_panel);
}

ScanOptions scan_options(const ExperimentConfig& cfg) { return {cfg.nodes_per_panel, solver_options(cfg), cfg.threads}; }

double require_sigma(const ExperimentConfig& cfg, const std::string& command) {
    if (!cfg.sigma) throw ConfigError(fmt::format("lambda.sigma: required by {}", command));
    return *cfg.sigma;
}

const std::vector<double>& require_taus(const ExperimentConfig& cfg, const std::string& command) {
    if (cfg.taus.empty()) throw ConfigError(fmt::format("lambda.taus: required by {}", command));
    return cfg.taus;
}

const Rectangle& require_rectangle(const ExperimentConfig& cfg, const std::string& command) {
    if (!cfg.rectangle) throw ConfigError(fmt::format("lambda.rectangle: required by {}", command));
    return *cfg.rectangle;
}

SearchOptions search_options(const ExperimentConfig& cfg) {
    SearchOptions o;
    o.tolerance = cfg.eigen_tolerance;
    o.min_cell = cfg.min_cell;
    o.nodes_per_panel = cfg.nodes_per_panel;
    o.solver = solver_options(cfg);
    return o;
}

void run_fundamental(const ExperimentConfig& cfg, Writer& out) {
    if (!cfg.lambda) throw ConfigError("lambda.value: required by fundamental");
    const Potential v = build_potential(cfg);
    const Complex lambda = *cfg.lambda;
    const auto grid = grid_for(cfg, lambda);
    const SystemKind system = cfg.system == "adjoint" ? SystemKind::adjoint : SystemKind::direct;
    const auto sol = solve_fundamental(v, SpectralParameter::natural(lambda), system, grid, solver_options(cfg));
    const auto& fm = sol.matrix;

    Csv csv{"x", "re_b11", "im_b11", "re_b12", "im_b12", "re_b21", "im_b21", "re_b22", "im_b22"};
    auto row = [&](double x, auto&& b) {
        csv.add(x);
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) csv.add(b(j, k).real()).add(b(j, k).imag());
        }
        csv.end();
    };
    row(0.0, [&](int j, int k) { return fm.remainder_at_left(j, k); });
    const auto x = grid->nodes();
    for (std::size_t i = 0; i < x.size(); ++i) row(x[i], [&](int j, int k) { return fm.remainder(j, k)[i]; });
    row(std::numbers::pi, [&](int j, int k) { return fm.remainder_at_right(j, k); });
    out.put("remainders.csv", csv.text());

    const Potential eq = system == SystemKind::direct ? v : adjoint_potential(v);
    const Complex mu = fm.phase_parameter();
    json j;
    j["lambda"] = complex_json(lambda);
    j["system"] = cfg.system;
    j["half_plane"] = fm.anchor_plane() == HalfPlane::upper ? "upper" : "lower";
    j["panels"] = grid->panel_count();
    j["nodes_per_panel"] = grid->nodes_per_panel();
    j["iterations"] = sol.report.iterations;
    j["final_update_sup"] = sol.report.final_update_sup;
    j["remainder_sup"] = sol.report.remainder_sup;
    j["remainder_w11"] = sol.report.remainder_w11;
    j["liouville_deviation"] = sol.report.liouville_deviation;
    j["column_log_scale"] = json::array({fm.column_log_scale(0), fm.column_log_scale(1)});
    j["ode_residual"] = json::array({ode_residual(fm.column(0), eq, mu), ode_residual(fm.column(1), eq, mu)});
    j["update_history"] = json::array({sol.report.update_history[0], sol.report.update_history[1]});
    out.put_json("picard_report.json", j);

    if (!cfg.sigmas.empty()) {
        if (!cfg.tau) throw ConfigError("lambda.tau: required with lambda.sigmas");
        const auto scan = remainder_decay_scan(v, cfg.sigmas, *cfg.tau, cfg.nodes_per_panel, solver_options(cfg),
                                               cfg.threads);
        Csv d{"sigma", "tau", "abs_lambda", "remainder_sup", "remainder_w11"};
        for (const auto& r : scan.rows) d.add(r.sigma).add(r.tau).add(r.abs_lambda).add(r.remainder_sup).add(r.remainder_w11).end();
        out.put("decay.csv", d.text());
    }
}

void run_verify_asymptotics(const ExperimentConfig& cfg, Writer& out) {
    const Potential v = build_potential(cfg);
    const double sigma = require_sigma(cfg, "verify-asymptotics");
    const auto& taus = require_taus(cfg, "verify-asymptotics");
    const auto opts = scan_options(cfg);
    const auto ladder = asymptotic_ladder(v, sigma, taus, opts);
    const auto sandwich = column_sandwich(ladder);
    const auto trends = cross_trends(ladder);

    Csv long_form{"quantity", "re_lambda", "im_lambda", "ratio"};
    Csv summary{"quantity", "lower_ratio", "upper_ratio", "band_factor", "within_band", "decreasing"};
    std::vector<const SandwichReport*> reports = sandwich.all();
    for (const auto* r : trends.all()) reports.push_back(r);
    for (const auto* r : reports) {
        for (std::size_t i = 0; i < r->ratios.size(); ++i) {
            long_form.add(r->quantity).add(r->lambdas[i].real()).add(r->lambdas[i].imag()).add(r->ratios[i]).end();
        }
        summary.add(r->quantity).add(r->lower_ratio).add(r->upper_ratio).add(r->band_factor());
        summary.add(within_band(*r, kBandFactor)).add(decreasing_with_slack(r->ratios, kTrendSlack)).end();
    }
    out.put("sandwich.csv", long_form.text());
    out.put("sandwich_summary.csv", summary.text());

    const auto samples = unit_sphere_samples(cfg.samples, cfg.seed);
    struct AuditRow {
        SandwichReport direct, adjoint, product;
    };
    const auto audits = parallel_map(taus.size(), cfg.threads, [&](std::size_t i) {
        const Complex lambda(sigma, taus[i]);
        const auto grid = Grid::for_spectral_bound(lambda.real(), lambda.imag(), cfg.nodes_per_panel);
        const auto param = SpectralParameter::natural(lambda);
        const auto y = solve_fundamental(v, param, SystemKind::direct, grid, opts.solver).matrix;
        const auto z = solve_fundamental(v, param, SystemKind::adjoint, grid, opts.solver).matrix;
        return AuditRow{lower_bound_audit(y, samples, cfg.lower_bound_threshold),
                        lower_bound_audit(z, samples, cfg.lower_bound_threshold),
                        product_lower_bound_audit(y, z, samples, cfg.lower_bound_threshold)};
    });
    Csv lb{"quantity", "re_lambda", "im_lambda", "worst_c", "best_c", "asserted"};
    for (const auto& a : audits) {
        for (const auto* r : {&a.direct, &a.adjoint, &a.product}) {
            lb.add(r->quantity).add(r->lambdas[0].real()).add(r->lambdas[0].imag());
            lb.add(r->lower_ratio).add(r->upper_ratio).add(r->asserted).end();
        }
    }
    out.put("lower_bound.csv", lb.text());

    json checks;
    checks["sandwich_Y1_within_band"] = within_band(sandwich.y1, kBandFactor);
    checks["sandwich_Y2_within_band"] = within_band(sandwich.y2, kBandFactor);
    checks["Ghat12_decreasing"] = decreasing_with_slack(trends.ghat12.ratios, kTrendSlack);
    checks["Ghat21_decreasing"] = decreasing_with_slack(trends.ghat21.ratios, kTrendSlack);
    auto in_unit_band = [](const SandwichReport& r) { return r.lower_ratio >= 0.05 && r.upper_ratio <= 1.0; };
    checks["Ghat11_in_band"] = in_unit_band(trends.ghat11);
    checks["Ghat22_in_band"] = in_unit_band(trends.ghat22);
    bool lower_ok = true;
    for (const auto& a : audits) {
        for (const auto* r : {&a.direct, &a.adjoint, &a.product}) {
            if (r->asserted && !(r->lower_ratio > 0.0)) lower_ok = false;
        }
    }
    checks["lower_bounds_positive"] = lower_ok;
    json j;
    j["sigma"] = sigma;
    j["taus"] = taus;
    j["band_factor"] = kBandFactor;
    j["trend_slack"] = kTrendSlack;
    j["checks"] = checks;
    out.put_json("assertions.json", j);
}

void run_lemma1(const ExperimentConfig& cfg, Writer& out, std::ostream& log) {
    const Potential v = build_potential(cfg);
    const double sigma = cfg.sigma.value_or(0.0);
    const auto& taus = require_taus(cfg, "lemma1-sweep");
    const auto table = lemma1_sweep(v, sigma, taus, cfg.coefficients, cfg.normalize, scan_options(cfg));
    std::vector<std::string> header{"tau", "log_norm_y", "log_norm_z", "log_inner", "ratio"};
    if (table.normalized) header.push_back("log_norm_product");
    Csv csv(header);
    for (const auto& r : table.rows) {
        csv.add(r.tau).add(r.log_norm_y).add(r.log_norm_z).add(r.log_inner).add(r.ratio);
        if (r.log_norm_product) csv.add(*r.log_norm_product);
        csv.end();
    }
    out.put("lemma1.csv", csv.text());
    json skipped = json::array();
    for (const auto& s : table.skipped) {
        log << fmt::format("warning: tau = {}: {}\n", number(s.tau), s.reason);
        skipped.push_back({{"tau", s.tau}, {"reason", s.reason}});
    }
    json j;
    j["sigma"] = sigma;
    j["normalized"] = table.normalized;
    j["rows"] = table.rows.size();
    j["skipped"] = skipped;
    out.put_json("lemma1.json", j);
}

json record_json(const EigenRecord& r) {
    json j;
    j["lambda"] = complex_json(r.lambda);
    j["multiplicity"] = r.multiplicity;
    j["cell"] = json::array({r.cell.re_min, r.cell.re_max, r.cell.im_min, r.cell.im_max});
    j["mantissa"] = r.mantissa;
    j["refined"] = r.refined;
    j["biorthogonal"] = r.biorthogonal;
    j["pairing_value"] = complex_json(r.pairing_value);
    j["associated_suspected"] = r.associated_suspected;
    j["ode_residual"] = r.ode_residual;
    j["boundary_residual"] = r.boundary_residual;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

void run_eigs(const ExperimentConfig& cfg, Writer& out) {
    const Potential v = build_potential(cfg);
    const auto bc = build_boundary(cfg);
    const auto& rect = require_rectangle(cfg, "eigs");
    const auto rep = find_eigenvalues(bc, v, rect, search_options(cfg));

    Csv csv{"index", "re_lambda", "im_lambda", "multiplicity", "mantissa", "refined", "biorthogonal", "re_pairing",
            "im_pairing", "log_norm_y", "log_norm_z", "log_proj_norm", "associated_suspected"};
    json records = json::array();
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        const auto& r = rep.records[i];
        const double ly = r.y ? h_norm(*r.y).log() : std::nan("");
        const double lz = r.z ? h_norm(*r.z).log() : std::nan("");
        csv.add(i + 1).add(r.lambda.real()).add(r.lambda.imag()).add(r.multiplicity).add(r.mantissa).add(r.refined);
        csv.add(r.biorthogonal).add(r.pairing_value.real()).add(r.pairing_value.imag()).add(ly).add(lz).add(ly + lz);
        csv.add(r.associated_suspected).end();
        records.push_back(record_json(r));
    }
    out.put("spectrum.csv", csv.text());
    json j;
    j["region"] = json::array({rep.region.re_min, rep.region.re_max, rep.region.im_min, rep.region.im_max});
    j["winding_total"] = rep.winding_total;
    j["max_im"] = rep.max_im;
    j["determinant_evaluations"] = rep.determinant_evaluations;
    j["nudges"] = rep.nudges;
    j["records"] = records;
    out.put_json("spectrum.json", j);
}

void run_expansion(const ExperimentConfig& cfg, Writer& out) {
    const Potential v = build_potential(cfg);
    std::vector<EigenRecord> system;
    if (cfg.expansion_source == "spectrum") {
        const auto bc = build_boundary(cfg);
        auto rep = find_eigenvalues(bc, v, require_rectangle(cfg, "expansion-audit"), search_options(cfg));
        for (auto& r : rep.records) {
            if (r.y && r.z) system.push_back(std::move(r));
        }
    } else {
        const auto pairs = lemma1_pairs(v, cfg.sigma.value_or(0.0), require_taus(cfg, "expansion-audit"),
                                        cfg.coefficients, true, scan_options(cfg));
        system = records_from_pairs(pairs);
    }
    if (system.empty()) throw Error("expansion-audit: no biorthogonal pairs to audit");

    std::optional<Probe> probe;
    if (cfg.probe == "ones") probe = Probe{[](double) { return Complex(1.0); }, [](double) { return Complex(1.0); }};
    // spectra are enumerated canonically, synthetic systems by tau
    const bool sort = cfg.expansion_source == "spectrum";
    const auto rep = divergence_witness(system, probe, sort);

    Csv csv{"n", "re_lambda", "im_lambda", "log_proj_norm", "witness"};
    for (std::size_t i = 0; i < rep.n.size(); ++i) {
        const double w = rep.log_witness[i] ? LogMagnitude::from_log(*rep.log_witness[i]).linear() : std::nan("");
        csv.add(rep.n[i]).add(rep.lambdas[i].real()).add(rep.lambdas[i].imag()).add(rep.log_norms[i]).add(w).end();
    }
    out.put("divergence.csv", csv.text());

    std::vector<std::size_t> order(system.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (sort) order = expansion_order(system);
    Csv pn{"n", "log_exact", "log_scaled_bound", "log_component_bound", "log_maximizer", "log_probe_z2", "log_probe_z1"};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& r = system[order[i]];
        const auto norm = projector_norm(RankOneProjector(*r.y, *r.z));
        pn.add(i + 1).add(norm.exact.log()).add(norm.scaled_lower_bound.log()).add(norm.component_bound.log());
        pn.add(norm.maximizer_value.log()).add(norm.probe_values[0].log()).add(norm.probe_values[1].log()).end();
    }
    out.put("projectors.csv", pn.text());

    json j;
    j["source"] = cfg.expansion_source;
    j["records"] = rep.n.size();
    j["verdict"] = to_string(rep.verdict);
    j["tail_rise"] = rep.tail_rise;
    j["max_log_proj_norm"] = *std::max_element(rep.log_norms.begin(), rep.log_norms.end());
    j["probe"] = cfg.probe;
    json witness = json::array();
    for (const auto& w : rep.log_witness) witness.push_back(w ? real_json(*w) : json(nullptr));
    j["log_witness"] = witness;
    out.put_json("divergence.json", j);
}

}  // namespace

std::vector<fs::path> run_command(const std::string& command, ExperimentConfig cfg, std::ostream& log) {
    if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands)) {
        throw ConfigError("command: unknown command '" + command + "'");
    }
    if (!cfg.command.empty() && cfg.command != command) {
        throw ConfigError(fmt::format("command: config is for '{}', not '{}'", cfg.command, command));
    }
    cfg.command = command;
    Writer out(cfg.output);
    if (command == "fundamental") {
        run_fundamental(cfg, out);
    } else if (command == "verify-asymptotics") {
        run_verify_asymptotics(cfg, out);
    } else if (command == "lemma1-sweep") {
        run_lemma1(cfg, out, log);
    } else if (command == "eigs") {
        run_eigs(cfg, out);
    } else {
        run_expansion(cfg, out);
    }
    out.put("manifest.toml", to_toml(cfg));
    return out.files();
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Dirac system diagnostics: fundamental matrices, asymptotics, spectra, expansions"};
    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "fundamental | verify-asymptotics | lemma1-sweep | eigs | expansion-audit")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(kCommands), std::end(kCommands))));
    app.add_option("--config", config_path, "TOML experiment configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides `output`)");
    app.add_option("--threads", threads, "worker threads for sweeps");
    app.add_option("--seed", seed, "seed for coefficient sampling");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ExperimentConfig cfg = load_config(config_path);
        if (out_dir) cfg.output = *out_dir;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;
        const auto files = run_command(command, cfg, std::cerr);
        for (const auto& f : files) std::cout << f.string() << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dirac::cli
