#include "dirac/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "dirac/errors.hpp"

namespace dirac::cli {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what, const toml::node* node = nullptr) {
    std::string msg = fmt::format("{}: {}", field, what);
    if (node && node->source().begin) msg += fmt::format(" (line {})", node->source().begin.line);
    throw ConfigError(msg);
}

void reject_unknown(const toml::table& t, const std::string& prefix, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, node] : t) {
        if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end()) {
            fail(prefix.empty() ? std::string(key.str()) : prefix + "." + std::string(key.str()), "unknown key",
                 &node);
        }
    }
}

double as_real(const toml::node& n, const std::string& field) {
    if (auto v = n.value<double>()) return *v;
    fail(field, "expected a number", &n);
}

Complex as_complex(const toml::node& n, const std::string& field) {
    const auto* arr = n.as_array();
    if (!arr || arr->size() != 2) fail(field, "expected a complex number [re, im]", &n);
    return {as_real(*arr->get(0), field), as_real(*arr->get(1), field)};
}

std::vector<double> as_reals(const toml::node& n, const std::string& field) {
    const auto* arr = n.as_array();
    if (!arr) fail(field, "expected an array of numbers", &n);
    std::vector<double> out;
    for (const auto& e : *arr) out.push_back(as_real(e, field));
    return out;
}

std::vector<Potential::Term> as_terms(const toml::node& n, const std::string& field) {
    const auto* arr = n.as_array();
    if (!arr) fail(field, "expected an array of [frequency, re, im] triples", &n);
    std::vector<Potential::Term> out;
    for (const auto& e : *arr) {
        const auto* t = e.as_array();
        if (!t || t->size() != 3 || !t->get(0)->is_integer()) fail(field, "expected [frequency, re, im]", &e);
        const auto freq = t->get(0)->value<std::int64_t>().value();
        out.push_back({static_cast<int>(freq), {as_real(*t->get(1), field), as_real(*t->get(2), field)}});
    }
    return out;
}

template <typename T>
T get_or(const toml::table& t, std::string_view key, const std::string& field, T fallback) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if constexpr (std::is_same_v<T, bool>) {
        if (auto v = n->value<bool>(); v && n->is_boolean()) return *v;
        fail(field, "expected true or false", n);
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = n->value<std::string>()) return *v;
        fail(field, "expected a string", n);
    } else if constexpr (std::is_integral_v<T>) {
        auto v = n->value<std::int64_t>();
        if (!v || !n->is_integer() || *v < 0) fail(field, "expected a non-negative integer", n);
        return static_cast<T>(*v);
    } else {
        return as_real(*n, field);
    }
}

const toml::table* subtable(const toml::table& root, std::string_view key) {
    const toml::node* n = root.get(key);
    if (!n) return nullptr;
    if (!n->is_table()) fail(std::string(key), "expected a table", n);
    return n->as_table();
}

void positive(double v, const std::string& field, const toml::table* t, std::string_view key) {
    if (!(v > 0.0)) fail(field, "must be positive", t ? t->get(key) : nullptr);
}

std::string complex_toml(Complex c) { return fmt::format("[{}, {}]", c.real(), c.imag()); }

std::string reals_toml(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{}", i ? ", " : "", v[i]);
    return s + "]";
}

std::string terms_toml(const std::vector<Potential::Term>& terms) {
    std::string s = "[";
    for (std::size_t i = 0; i < terms.size(); ++i) {
        s += fmt::format("{}[{}, {}, {}]", i ? ", " : "", terms[i].frequency, terms[i].coeff.real(),
                         terms[i].coeff.imag());
    }
    return s + "]";
}

std::string quoted(const std::string& s) {
    std::ostringstream os;
    os << toml::value<std::string>(s);
    return os.str();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    toml::table root;
    try {
        root = toml::parse(text);
    } catch (const toml::parse_error& e) {
        throw ConfigError(fmt::format("parse error: {} (line {})", e.description(), e.source().begin.line));
    }
    reject_unknown(root, "",
                   {"command", "output", "seed", "threads", "potential", "grid", "lambda", "boundary", "tolerances",
                    "coefficients", "lemma", "audit", "expansion"});

    ExperimentConfig cfg;
    cfg.base_dir = base_dir;
    cfg.command = get_or<std::string>(root, "command", "command", "");
    if (!cfg.command.empty() && std::find(std::begin(kCommands), std::end(kCommands), cfg.command) == std::end(kCommands)) {
        fail("command", "unknown command '" + cfg.command + "'", root.get("command"));
    }
    cfg.output = get_or<std::string>(root, "output", "output", cfg.output);
    cfg.seed = get_or<std::uint64_t>(root, "seed", "seed", cfg.seed);
    cfg.threads = get_or<unsigned>(root, "threads", "threads", cfg.threads);

    if (const auto* t = subtable(root, "potential")) {
        reject_unknown(*t, "potential", {"preset", "p", "q", "p_terms", "q_terms", "file"});
        auto& ps = cfg.potential;
        ps.preset = get_or<std::string>(*t, "preset", "potential.preset", ps.preset);
        static const std::set<std::string> presets{"zero", "constant", "trigpoly", "sampled"};
        if (!presets.contains(ps.preset)) fail("potential.preset", "unknown preset '" + ps.preset + "'", t->get("preset"));
        if (const auto* n = t->get("p")) ps.p = as_complex(*n, "potential.p");
        if (const auto* n = t->get("q")) ps.q = as_complex(*n, "potential.q");
        if (const auto* n = t->get("p_terms")) ps.p_terms = as_terms(*n, "potential.p_terms");
        if (const auto* n = t->get("q_terms")) ps.q_terms = as_terms(*n, "potential.q_terms");
        ps.file = get_or<std::string>(*t, "file", "potential.file", "");
        if (ps.preset == "sampled" && ps.file.empty()) fail("potential.file", "required for the sampled preset", t);
    }

    if (const auto* t = subtable(root, "grid")) {
        reject_unknown(*t, "grid", {"nodes_per_panel", "panels"});
        cfg.nodes_per_panel = get_or<std::size_t>(*t, "nodes_per_panel", "grid.nodes_per_panel", cfg.nodes_per_panel);
        cfg.panels = get_or<std::size_t>(*t, "panels", "grid.panels", cfg.panels);
        if (cfg.nodes_per_panel < 2) fail("grid.nodes_per_panel", "must be at least 2", t->get("nodes_per_panel"));
    }

    if (const auto* t = subtable(root, "lambda")) {
        reject_unknown(*t, "lambda", {"value", "system", "sigma", "taus", "sigmas", "tau", "rectangle"});
        if (const auto* n = t->get("value")) cfg.lambda = as_complex(*n, "lambda.value");
        cfg.system = get_or<std::string>(*t, "system", "lambda.system", cfg.system);
        if (cfg.system != "direct" && cfg.system != "adjoint") {
            fail("lambda.system", "expected 'direct' or 'adjoint'", t->get("system"));
        }
        if (const auto* n = t->get("sigma")) cfg.sigma = as_real(*n, "lambda.sigma");
        if (const auto* n = t->get("tau")) cfg.tau = as_real(*n, "lambda.tau");
        if (const auto* n = t->get("taus")) {
            cfg.taus = as_reals(*n, "lambda.taus");
            for (std::size_t i = 0; i < cfg.taus.size(); ++i) {
                if (!(cfg.taus[i] > 0.0) || (i > 0 && !(cfg.taus[i] > cfg.taus[i - 1]))) {
                    fail("lambda.taus", "must be positive and strictly increasing", n);
                }
            }
        }
        if (const auto* n = t->get("sigmas")) cfg.sigmas = as_reals(*n, "lambda.sigmas");
        if (const auto* n = t->get("rectangle")) {
            const auto v = as_reals(*n, "lambda.rectangle");
            if (v.size() != 4) fail("lambda.rectangle", "expected [re_min, re_max, im_min, im_max]", n);
            if (!(v[1] > v[0]) || !(v[3] > v[2])) fail("lambda.rectangle", "rectangle is empty", n);
            cfg.rectangle = Rectangle{v[0], v[1], v[2], v[3]};
        }
    }

    if (const auto* t = subtable(root, "boundary")) {
        reject_unknown(*t, "boundary", {"preset", "a"});
        cfg.boundary_preset = get_or<std::string>(*t, "preset", "boundary.preset", "");
        if (!cfg.boundary_preset.empty() && cfg.boundary_preset != "demo" && cfg.boundary_preset != "periodic" &&
            cfg.boundary_preset != "initial") {
            fail("boundary.preset", "unknown preset '" + cfg.boundary_preset + "'", t->get("preset"));
        }
        if (const auto* n = t->get("a")) {
            if (!cfg.boundary_preset.empty()) fail("boundary.a", "give either a preset or a matrix", n);
            const auto* rows = n->as_array();
            if (!rows || rows->size() != 2) fail("boundary.a", "expected two rows of four [re, im] pairs", n);
            BoundaryMatrix a;
            for (int i = 0; i < 2; ++i) {
                const auto* row = rows->get(static_cast<std::size_t>(i))->as_array();
                if (!row || row->size() != 4) fail("boundary.a", "expected two rows of four [re, im] pairs", n);
                for (int j = 0; j < 4; ++j) a(i, j) = as_complex(*row->get(static_cast<std::size_t>(j)), "boundary.a");
            }
            try {
                BoundaryConditions check(a);
            } catch (const InputError& e) {
                fail("boundary.a", e.what(), n);
            }
            cfg.boundary = a;
        }
    }

    if (const auto* t = subtable(root, "tolerances")) {
        reject_unknown(*t, "tolerances", {"picard", "max_iterations", "eigen", "min_cell", "lower_bound_threshold"});
        cfg.picard_tolerance = get_or<double>(*t, "picard", "tolerances.picard", cfg.picard_tolerance);
        positive(cfg.picard_tolerance, "tolerances.picard", t, "picard");
        cfg.max_iterations = get_or<int>(*t, "max_iterations", "tolerances.max_iterations", cfg.max_iterations);
        if (cfg.max_iterations < 1) fail("tolerances.max_iterations", "must be positive", t->get("max_iterations"));
        cfg.eigen_tolerance = get_or<double>(*t, "eigen", "tolerances.eigen", cfg.eigen_tolerance);
        positive(cfg.eigen_tolerance, "tolerances.eigen", t, "eigen");
        cfg.min_cell = get_or<double>(*t, "min_cell", "tolerances.min_cell", cfg.min_cell);
        positive(cfg.min_cell, "tolerances.min_cell", t, "min_cell");
        cfg.lower_bound_threshold =
            get_or<double>(*t, "lower_bound_threshold", "tolerances.lower_bound_threshold", cfg.lower_bound_threshold);
    }

    if (const auto* t = subtable(root, "coefficients")) {
        reject_unknown(*t, "coefficients", {"c1", "c2", "c1t", "c2t"});
        auto& c = cfg.coefficients;
        if (const auto* n = t->get("c1")) c.c1 = as_complex(*n, "coefficients.c1");
        if (const auto* n = t->get("c2")) c.c2 = as_complex(*n, "coefficients.c2");
        if (const auto* n = t->get("c1t")) c.c1t = as_complex(*n, "coefficients.c1t");
        if (const auto* n = t->get("c2t")) c.c2t = as_complex(*n, "coefficients.c2t");
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            fail("coefficients", e.what(), t);
        }
    }

    if (const auto* t = subtable(root, "lemma")) {
        reject_unknown(*t, "lemma", {"normalize"});
        cfg.normalize = get_or<bool>(*t, "normalize", "lemma.normalize", cfg.normalize);
    }
    if (const auto* t = subtable(root, "audit")) {
        reject_unknown(*t, "audit", {"samples"});
        cfg.samples = get_or<std::size_t>(*t, "samples", "audit.samples", cfg.samples);
    }
    if (const auto* t = subtable(root, "expansion")) {
        reject_unknown(*t, "expansion", {"source", "probe"});
        cfg.expansion_source = get_or<std::string>(*t, "source", "expansion.source", cfg.expansion_source);
        if (cfg.expansion_source != "spectrum" && cfg.expansion_source != "lemma1") {
            fail("expansion.source", "expected 'spectrum' or 'lemma1'", t->get("source"));
        }
        cfg.probe = get_or<std::string>(*t, "probe", "expansion.probe", cfg.probe);
        if (cfg.probe != "ones" && cfg.probe != "none") fail("expansion.probe", "expected 'ones' or 'none'", t->get("probe"));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("config: cannot open '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_config(ss.str(), dir);
}

std::string to_toml(const ExperimentConfig& c) {
    std::string s;
    auto line = [&s](const std::string& l) { s += l + "\n"; };
    if (!c.command.empty()) line("command = " + quoted(c.command));
    line("output = " + quoted(c.output));
    line(fmt::format("seed = {}", c.seed));
    line(fmt::format("threads = {}", c.threads));

    line("\n[potential]");
    line("preset = " + quoted(c.potential.preset));
    line("p = " + complex_toml(c.potential.p));
    line("q = " + complex_toml(c.potential.q));
    line("p_terms = " + terms_toml(c.potential.p_terms));
    line("q_terms = " + terms_toml(c.potential.q_terms));
    if (!c.potential.file.empty()) {
        line("file = " + quoted(std::filesystem::absolute(c.base_dir / c.potential.file).lexically_normal().string()));
    }

    line("\n[grid]");
    line(fmt::format("nodes_per_panel = {}", c.nodes_per_panel));
    line(fmt::format("panels = {}", c.panels));

    line("\n[lambda]");
    if (c.lambda) line("value = " + complex_toml(*c.lambda));
    line("system = " + quoted(c.system));
    if (c.sigma) line(fmt::format("sigma = {}", *c.sigma));
    if (!c.taus.empty()) line("taus = " + reals_toml(c.taus));
    if (!c.sigmas.empty()) line("sigmas = " + reals_toml(c.sigmas));
    if (c.tau) line(fmt::format("tau = {}", *c.tau));
    if (c.rectangle) {
        const auto& r = *c.rectangle;
        line(fmt::format("rectangle = [{}, {}, {}, {}]", r.re_min, r.re_max, r.im_min, r.im_max));
    }

    if (c.boundary || !c.boundary_preset.empty()) {
        line("\n[boundary]");
        if (c.boundary) {
            std::string rows = "[";
            for (int i = 0; i < 2; ++i) {
                rows += i ? ", [" : "[";
                for (int j = 0; j < 4; ++j) rows += (j ? ", " : "") + complex_toml((*c.boundary)(i, j));
                rows += "]";
            }
            line("a = " + rows + "]");
        } else {
            line("preset = " + quoted(c.boundary_preset));
        }
    }

    line("\n[tolerances]");
    line(fmt::format("picard = {}", c.picard_tolerance));
    line(fmt::format("max_iterations = {}", c.max_iterations));
    line(fmt::format("eigen = {}", c.eigen_tolerance));
    line(fmt::format("min_cell = {}", c.min_cell));
    line(fmt::format("lower_bound_threshold = {}", c.lower_bound_threshold));

    line("\n[coefficients]");
    line("c1 = " + complex_toml(c.coefficients.c1));
    line("c2 = " + complex_toml(c.coefficients.c2));
    line("c1t = " + complex_toml(c.coefficients.c1t));
    line("c2t = " + complex_toml(c.coefficients.c2t));

    line("\n[lemma]");
    line(fmt::format("normalize = {}", c.normalize));
    line("\n[audit]");
    line(fmt::format("samples = {}", c.samples));
    line("\n[expansion]");
    line("source = " + quoted(c.expansion_source));
    line("probe = " + quoted(c.probe));
    return s;
}

Potential build_potential(const ExperimentConfig& cfg) {
    const auto& ps = cfg.potential;
    if (ps.preset == "zero") return Potential::zero();
    if (ps.preset == "constant") return Potential::constant(ps.p, ps.q);
    if (ps.preset == "trigpoly") return Potential::trig(ps.p_terms, ps.q_terms);
    const auto path = std::filesystem::path(ps.file).is_absolute() ? std::filesystem::path(ps.file) : cfg.base_dir / ps.file;
    try {
        return Potential::from_csv(path);
    } catch (const InputError& e) {
        throw ConfigError(std::string("potential.file: ") + e.what());
    }
}

BoundaryConditions build_boundary(const ExperimentConfig& cfg) {
    if (cfg.boundary) return BoundaryConditions(*cfg.boundary);
    if (cfg.boundary_preset == "demo") return BoundaryConditions::demo();
    if (cfg.boundary_preset == "periodic") return BoundaryConditions::periodic();
    if (cfg.boundary_preset == "initial") return BoundaryConditions::initial();
    throw ConfigError("boundary: missing (give boundary.preset or boundary.a)");
}

SolverOptions solver_options(const ExperimentConfig& cfg) { return {cfg.picard_tolerance, cfg.max_iterations}; }

}  // namespace dirac::cli
