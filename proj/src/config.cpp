#include "fdsic/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "parse_util.hpp"

namespace fdsic {
namespace {

using detail::lower;
using detail::trim;

struct Ctx {
    std::string origin;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
    }
};

double get_double(const Ctx& c, const std::string& key, const std::string& v) {
    auto d = detail::to_double(v);
    if (!d) c.fail("key '" + key + "' expects a number, got '" + v + "'");
    return *d;
}

int get_int(const Ctx& c, const std::string& key, const std::string& v) {
    auto n = detail::to_int<int>(v);
    if (!n) c.fail("key '" + key + "' expects an integer, got '" + v + "'");
    return *n;
}

bool get_bool(const Ctx& c, const std::string& key, const std::string& v) {
    const auto l = lower(v);
    if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
    if (l == "false" || l == "no" || l == "off" || l == "0") return false;
    c.fail("key '" + key + "' expects true or false, got '" + v + "'");
}

std::vector<double> get_list(const Ctx& c, const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& item : detail::split_list(v)) out.push_back(get_double(c, key, item));
    return out;
}

template <typename E>
E get_enum(const Ctx& c, const std::string& key, const std::string& v, const std::map<std::string, E>& names) {
    auto it = names.find(lower(v));
    if (it == names.end()) {
        std::string allowed;
        for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : ", ") + n;
        c.fail("key '" + key + "' expects one of {" + allowed + "}, got '" + v + "'");
    }
    return it->second;
}

const std::map<std::string, QuantMode> kQuantModes{
    {"ideal", QuantMode::ideal}, {"round_nearest", QuantMode::round_nearest}, {"stochastic", QuantMode::stochastic}};
const std::map<std::string, DelayPreset> kPresets{{"matched", DelayPreset::matched},
                                                  {"evenly_spaced", DelayPreset::evenly_spaced},
                                                  {"explicit", DelayPreset::explicit_list}};
const std::map<std::string, DsicMode> kDsicModes{
    {"none", DsicMode::none}, {"linear", DsicMode::linear}, {"nonlinear", DsicMode::nonlinear}, {"both", DsicMode::both}};
const std::map<std::string, ChainMode> kChains{{"analog", ChainMode::analog}, {"full", ChainMode::full}};

template <typename E>
std::string enum_name(E e, const std::map<std::string, E>& names) {
    for (const auto& [n, v] : names)
        if (v == e) return n;
    return "?";
}

using Setter = std::function<void(RunConfig&, const Ctx&, const std::string& key, const std::string& value)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"ofdm",
         {
             {"num_subcarriers", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.ofdm.num_subcarriers = get_int(c, k, v);
              }},
             {"used_subcarriers", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.ofdm.used_subcarriers = get_int(c, k, v);
              }},
             {"cp_length", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.ofdm.cp_length = get_int(c, k, v);
              }},
             {"constellation_order", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.ofdm.constellation_order = get_int(c, k, v);
              }},
         }},
        {"channel",
         {
             {"tap_gains_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.channel.tap_gains_db = get_list(c, k, v);
              }},
             {"tap_delays_s", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.channel.tap_delays_s = get_list(c, k, v);
              }},
             {"rician_factor_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.channel.rician_factor_db = get_double(c, k, v);
              }},
             {"sample_period_s", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.channel.sample_period_s = get_double(c, k, v);
              }},
             {"estimation_r_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.estimation_r_db = lower(v) == "none" ? kNoiselessRdb : get_double(c, k, v);
              }},
         }},
        {"circuit",
         {
             {"num_taps", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.circuit.num_taps = get_int(c, k, v);
              }},
             {"preset", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.circuit.preset = get_enum(c, k, v, kPresets);
              }},
             {"tau_min_s", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.circuit.tau_min_s = get_double(c, k, v);
              }},
             {"tau_max_s", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.circuit.tau_max_s = get_double(c, k, v);
              }},
             {"delays_s", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.circuit.delays_s = get_list(c, k, v);
              }},
         }},
        {"quantizer",
         {
             {"phase_bits", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  if (lower(v) == "ideal") r.trial.quantizer.phase_bits.reset();
                  else r.trial.quantizer.phase_bits = get_int(c, k, v);
              }},
             {"atten_step_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  if (lower(v) == "ideal") r.trial.quantizer.atten_step_db.reset();
                  else r.trial.quantizer.atten_step_db = get_double(c, k, v);
              }},
             {"mode", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.quantizer.mode = get_enum(c, k, v, kQuantModes);
              }},
             {"max_atten_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.quantizer.max_atten_db = get_double(c, k, v);
              }},
         }},
        {"pa",
         {
             {"coeffs", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.pa.odd_coeffs = get_list(c, k, v);
              }},
             {"round_normalized", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.round_normalized_pa = get_bool(c, k, v);
              }},
         }},
        {"budget",
         {
             {"tx_power_dbm", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.tx_power_dbm = get_double(c, k, v);
              }},
             {"pa_gain_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.pa_gain_db = get_double(c, k, v);
              }},
             {"passive_isolation_db", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.passive_isolation_db = get_double(c, k, v);
              }},
             {"noise_floor_dbm", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.noise_floor_dbm = get_double(c, k, v);
              }},
             {"adc_bits", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.adc_bits = get_int(c, k, v);
              }},
             {"pa_input_dbm", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.pa_input_dbm = get_double(c, k, v);
              }},
             {"noise_enabled", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.noise_enabled = get_bool(c, k, v);
              }},
             {"adc_enabled", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.adc_enabled = get_bool(c, k, v);
              }},
             {"adc_headroom", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.adc_headroom = get_double(c, k, v);
              }},
             {"rx_latency_samples", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.budget.rx_latency_samples = get_int(c, k, v);
              }},
         }},
        {"dsic",
         {
             {"mode", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.dsic.mode = get_enum(c, k, v, kDsicModes);
              }},
             {"orders", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.dsic.orders = get_int(c, k, v);
              }},
             {"taps", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.dsic.taps = get_int(c, k, v);
              }},
             {"samples", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.dsic.samples = get_int(c, k, v);
              }},
         }},
        {"sweep",
         {
             {"chain", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  r.trial.chain = get_enum(c, k, v, kChains);
              }},
             {"trials", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  auto n = detail::to_int<std::int64_t>(v);
                  if (!n || *n < 1) c.fail("key '" + k + "' expects a positive integer, got '" + v + "'");
                  r.trials = *n;
              }},
             {"seed", [](RunConfig& r, const Ctx& c, const std::string& k, const std::string& v) {
                  auto n = detail::to_int<std::uint64_t>(v);
                  if (!n) c.fail("key '" + k + "' expects a non-negative integer, got '" + v + "'");
                  r.trial.seed = *n;
              }},
         }},
    };
    return s;
}

RunConfig preset_config(const Ctx& c, const std::string& name) {
    RunConfig r;
    const auto l = lower(name);
    if (l == "link") r.trial = link_preset(false);
    else if (l == "link_ideal") r.trial = link_preset(true);
    else if (l == "analog") r.trial = analog_preset(4, 10, 0.01);
    else c.fail("preset expects one of {link, link_ideal, analog}, got '" + name + "'");
    return r;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Ctx ctx{origin, 0};
    RunConfig cfg;
    cfg.trial = link_preset(false);
    std::string section;
    std::set<std::string> seen;
    std::set<std::string> axes_seen;
    bool any_section = false;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++ctx.line;
        std::string_view line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') ctx.fail("malformed section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!schema().count(section)) ctx.fail("unknown section [" + section + "]");
            any_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) ctx.fail("expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) ctx.fail("empty key");
        if (!any_section) {
            if (key != "preset") ctx.fail("key '" + key + "' must be inside a section");
            if (!seen.insert("preset").second) ctx.fail("duplicate key 'preset'");
            cfg = preset_config(ctx, value);
            continue;
        }
        const std::string full = section + "." + key;
        if (!seen.insert(full).second) ctx.fail("duplicate key '" + key + "' in [" + section + "]");
        if (section == "sweep" && key.rfind("axis.", 0) == 0) {
            const std::string axis = key.substr(5);
            const auto& names = sweep_axis_names();
            if (std::find(names.begin(), names.end(), axis) == names.end())
                ctx.fail("unknown sweep axis '" + axis + "'");
            auto values = detail::split_list(value);
            if (values.empty()) ctx.fail("sweep axis '" + axis + "' has no values");
            // Check every value now so the error carries this line number.
            for (const auto& v : values) {
                TrialConfig probe = cfg.trial;
                try {
                    apply_axis_value(probe, axis, v);
                } catch (const ConfigError& e) {
                    ctx.fail(e.what());
                }
            }
            cfg.axes.push_back({axis, std::move(values)});
            continue;
        }
        const auto& keys = schema().at(section);
        auto it = keys.find(key);
        if (it == keys.end()) ctx.fail("unknown key '" + key + "' in [" + section + "]");
        it->second(cfg, ctx, key, value);
    }
    try {
        cfg.trial.validate();
        for (const auto& p : expand_grid(cfg.sweep_spec())) p.cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
    const TrialConfig& t = cfg.trial;
    std::ostringstream o;
    o << "[ofdm]\n"
      << "num_subcarriers = " << t.ofdm.num_subcarriers << "\n"
      << "used_subcarriers = " << t.ofdm.used_subcarriers << "\n"
      << "cp_length = " << t.ofdm.cp_length << "\n"
      << "constellation_order = " << t.ofdm.constellation_order << "\n\n";
    o << "[channel]\n"
      << "tap_gains_db = " << fmt_list(t.channel.tap_gains_db) << "\n"
      << "tap_delays_s = " << fmt_list(t.channel.tap_delays_s) << "\n"
      << "rician_factor_db = " << fmt(t.channel.rician_factor_db) << "\n"
      << "sample_period_s = " << fmt(t.channel.sample_period_s) << "\n"
      << "estimation_r_db = " << fmt(t.estimation_r_db) << "\n\n";
    o << "[circuit]\n"
      << "num_taps = " << t.circuit.num_taps << "\n"
      << "preset = " << enum_name(t.circuit.preset, kPresets) << "\n"
      << "tau_min_s = " << fmt(t.circuit.tau_min_s) << "\n"
      << "tau_max_s = " << fmt(t.circuit.tau_max_s) << "\n"
      << "delays_s = " << fmt_list(t.circuit.delays_s) << "\n\n";
    o << "[quantizer]\n"
      << "phase_bits = " << (t.quantizer.phase_bits ? std::to_string(*t.quantizer.phase_bits) : "ideal") << "\n"
      << "atten_step_db = " << (t.quantizer.atten_step_db ? fmt(*t.quantizer.atten_step_db) : "ideal") << "\n"
      << "mode = " << enum_name(t.quantizer.mode, kQuantModes) << "\n"
      << "max_atten_db = " << fmt(t.quantizer.max_atten_db) << "\n\n";
    o << "[pa]\n"
      << "coeffs = " << fmt_list(t.pa.odd_coeffs) << "\n"
      << "round_normalized = " << (t.round_normalized_pa ? "true" : "false") << "\n\n";
    o << "[budget]\n"
      << "tx_power_dbm = " << fmt(t.budget.tx_power_dbm) << "\n"
      << "pa_gain_db = " << fmt(t.budget.pa_gain_db) << "\n"
      << "passive_isolation_db = " << fmt(t.budget.passive_isolation_db) << "\n"
      << "noise_floor_dbm = " << fmt(t.budget.noise_floor_dbm) << "\n"
      << "adc_bits = " << t.budget.adc_bits << "\n"
      << "pa_input_dbm = " << fmt(t.budget.pa_input_dbm) << "\n"
      << "noise_enabled = " << (t.budget.noise_enabled ? "true" : "false") << "\n"
      << "adc_enabled = " << (t.budget.adc_enabled ? "true" : "false") << "\n"
      << "adc_headroom = " << fmt(t.budget.adc_headroom) << "\n"
      << "rx_latency_samples = " << t.budget.rx_latency_samples << "\n\n";
    o << "[dsic]\n"
      << "mode = " << enum_name(t.dsic.mode, kDsicModes) << "\n"
      << "orders = " << t.dsic.orders << "\n"
      << "taps = " << t.dsic.taps << "\n"
      << "samples = " << t.dsic.samples << "\n\n";
    o << "[sweep]\n"
      << "chain = " << enum_name(t.chain, kChains) << "\n"
      << "trials = " << cfg.trials << "\n"
      << "seed = " << t.seed << "\n";
    for (const auto& a : cfg.axes) {
        o << "axis." << a.name << " = ";
        for (size_t i = 0; i < a.values.size(); ++i) o << (i ? ", " : "") << a.values[i];
        o << "\n";
    }
    return o.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

}  // namespace fdsic
