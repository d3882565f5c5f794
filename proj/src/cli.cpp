#include "fdsic/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fdsic/validation.hpp"
#include "parse_util.hpp"

namespace fdsic {
namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
        out_.flush();
    }

  private:
    std::ostream& out_;
};

// Leading columns describing one grid point.
const std::vector<std::string> kPointHeader{"M_taps", "B_bits", "delta_db", "r_db", "pa_psi3", "quant_mode"};

std::vector<std::string> point_cells(const TrialConfig& c) {
    const auto& q = c.quantizer;
    const bool ideal = q.mode == QuantMode::ideal;
    const char* mode = q.mode == QuantMode::ideal ? "ideal" : (q.mode == QuantMode::stochastic ? "stochastic" : "round_nearest");
    return {std::to_string(c.circuit.num_taps),
            (!ideal && q.phase_bits) ? std::to_string(*q.phase_bits) : "ideal",
            (!ideal && q.atten_step_db) ? num(*q.atten_step_db) : "ideal",
            num(c.estimation_r_db),
            num(c.effective_pa().psi3()),
            mode};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

RunConfig load(const RunManifest& m) {
    RunConfig cfg = m.config_path.empty() ? parse_config_text("", "<defaults>") : parse_config(m.config_path);
    if (m.base_seed) cfg.trial.seed = *m.base_seed;
    if (m.trials) {
        if (*m.trials < 1) throw ConfigError("--trials must be >= 1");
        cfg.trials = *m.trials;
    }
    return cfg;
}

void run_theory(const RunConfig& cfg, CsvWriter& csv) {
    csv.row(concat(kPointHeader, {"residual_theory_lin", "sic_theory_db"}));
    for (const auto& p : expand_grid(cfg.sweep_spec())) {
        const double res = theory_residual_power(p.cfg);
        csv.row(concat(point_cells(p.cfg), {num(res), num(sic_db(res))}));
    }
}

void run_montecarlo(const RunConfig& cfg, CsvWriter& csv) {
    csv.row(concat(kPointHeader, {"trials_count", "residual_mc_lin", "residual_mc_se_lin", "sic_mc_db", "sic_mc_se_db"}));
    for (const auto& p : expand_grid(cfg.sweep_spec())) {
        const McSummary s = monte_carlo_sic(p.cfg, cfg.trials);
        csv.row(concat(point_cells(p.cfg), {std::to_string(s.trials), num(s.mean_residual), num(s.se_residual),
                                            num(s.mean_sic_db), num(s.se_sic_db)}));
    }
}

void run_sweep(const RunConfig& cfg, CsvWriter& csv) {
    csv.row(concat(kPointHeader, {"trials_count", "sic_theory_db", "sic_mc_db", "sic_mc_se_db", "mc_minus_theory_db"}));
    for (const auto& p : expand_grid(cfg.sweep_spec())) {
        const McSummary s = monte_carlo_sic(p.cfg, cfg.trials);
        const double th = sic_db(theory_residual_power(p.cfg));
        csv.row(concat(point_cells(p.cfg), {std::to_string(s.trials), num(th), num(s.mean_sic_db), num(s.se_sic_db),
                                            num(s.mean_sic_db - th)}));
    }
}

void run_link(RunConfig cfg, CsvWriter& csv) {
    cfg.trial.chain = ChainMode::full;
    csv.row(concat(kPointHeader, {"dsic_mode", "trials_count", "stage", "power_dbm"}));
    for (const auto& p : expand_grid(cfg.sweep_spec())) {
        const McSummary s = monte_carlo_sic(p.cfg, cfg.trials);
        const char* dm = p.cfg.dsic.mode == DsicMode::none     ? "none"
                         : p.cfg.dsic.mode == DsicMode::linear ? "linear"
                         : p.cfg.dsic.mode == DsicMode::nonlinear ? "nonlinear"
                                                                  : "both";
        const auto lead = concat(point_cells(p.cfg), {dm, std::to_string(s.trials)});
        const std::pair<const char*, double> stages[] = {{"after_passive", s.power_after_passive_dbm},
                                                         {"after_analog", s.power_after_analog_dbm},
                                                         {"after_linear_dsic", s.power_after_linear_dsic_dbm},
                                                         {"after_nonlinear_dsic", s.power_after_nonlinear_dsic_dbm}};
        for (const auto& [name, v] : stages)
            if (!std::isnan(v)) csv.row(concat(lead, {name, num(v)}));
    }
}

bool run_validate(const RunManifest& m, CsvWriter& csv) {
    const std::uint64_t seed = m.base_seed.value_or(1);
    const std::int64_t trials = m.trials.value_or(20000);
    if (trials < 1) throw ConfigError("--trials must be >= 1");
    csv.row({"check", "value", "comparison", "threshold", "pass"});
    bool ok = true;
    for (const auto& r : run_validation_suite(seed, trials)) {
        csv.row({r.name, num(r.value), r.comparison, num(r.threshold), r.pass ? "pass" : "fail"});
        ok = ok && r.pass;
    }
    return ok;
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
    if (name == "theory") return Subcommand::theory;
    if (name == "montecarlo") return Subcommand::montecarlo;
    if (name == "link") return Subcommand::link;
    if (name == "sweep") return Subcommand::sweep;
    if (name == "validate") return Subcommand::validate;
    throw ConfigError("unknown subcommand '" + name + "' (expected theory, montecarlo, link, sweep or validate)");
}

std::string to_string(Subcommand s) {
    switch (s) {
        case Subcommand::theory: return "theory";
        case Subcommand::montecarlo: return "montecarlo";
        case Subcommand::link: return "link";
        case Subcommand::sweep: return "sweep";
        case Subcommand::validate: return "validate";
    }
    return "?";
}

std::optional<int> thread_override() {
    const char* v = std::getenv("FDSIC_THREADS");
    if (v == nullptr) return std::nullopt;
    auto n = detail::to_int<int>(v);
    if (!n || *n < 1) return std::nullopt;
    return n;
}

void run_to_stream(const RunManifest& manifest, std::ostream& out) {
    CsvWriter csv(out);
    try {
        if (manifest.subcommand == Subcommand::validate) {
            if (!run_validate(manifest, csv)) throw Error("validation checks failed");
            return;
        }
        const RunConfig cfg = load(manifest);
        switch (manifest.subcommand) {
            case Subcommand::theory: run_theory(cfg, csv); break;
            case Subcommand::montecarlo: run_montecarlo(cfg, csv); break;
            case Subcommand::link: run_link(cfg, csv); break;
            case Subcommand::sweep: run_sweep(cfg, csv); break;
            case Subcommand::validate: break;
        }
    } catch (const std::exception& e) {
        std::string reason = e.what();
        for (char& c : reason)
            if (c == '\n') c = ' ';
        out << "# FAILED: " << reason << '\n';
        out.flush();
        throw;
    }
}

int run(const RunManifest& manifest, std::ostream& err) {
#ifdef _OPENMP
    if (auto n = thread_override()) omp_set_num_threads(*n);
#endif
    try {
        if (manifest.output_path.empty()) throw ConfigError("--out must not be empty");
        if (manifest.output_path == "-") {
            run_to_stream(manifest, std::cout);
        } else {
            std::ofstream f(manifest.output_path, std::ios::binary);
            if (!f) throw ConfigError("cannot open output file '" + manifest.output_path + "'");
            run_to_stream(manifest, f);
        }
    } catch (const std::exception& e) {
        err << "fdsic " << to_string(manifest.subcommand) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace fdsic
