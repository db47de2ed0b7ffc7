// mbqs: command-line pipeline for the many-body quantum score benchmark.
//
// Subcommands:
//   reference  exact correlation tables for a quench (free-fermion engine)
//   surge      surge times: numeric peaks, linear regression, analytic root
//   sample     synthetic device shots from the noisy Rydberg sampler
//   score      score shot records against reference tables
//   noise-fit  dephasing-law fit and predicted score

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mbqs/ed_oracle.hpp"
#include "mbqs/errors.hpp"
#include "mbqs/freefermion.hpp"
#include "mbqs/lindblad.hpp"
#include "mbqs/sampler.hpp"
#include "mbqs/scoring.hpp"
#include "mbqs/shot_record.hpp"
#include "mbqs/surge.hpp"
#include "mbqs/tables.hpp"

namespace fs = std::filesystem;
using namespace mbqs;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kFormat = 3,
    kResource = 4,
    kCompute = 5,
};

// "6..20" (inclusive), "4,6,8" or "12"
std::vector<int> parse_L_list(const std::string& text) {
    std::vector<int> out;
    const auto range_pos = text.find("..");
    if (range_pos != std::string::npos) {
        const int lo = std::stoi(text.substr(0, range_pos));
        const int hi = std::stoi(text.substr(range_pos + 2));
        if (hi < lo) throw ArgumentError("bad L range '" + text + "'");
        for (int L = lo; L <= hi; ++L) out.push_back(L);
        return out;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stoi(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw ArgumentError("empty L list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (out.empty()) throw ArgumentError("empty list");
    return out;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const nlohmann::json& params) {
    nlohmann::json m;
    m["command"] = command;
    m["parameters"] = params;
    atomic_write((out_dir / ("manifest_" + command + ".json")).string(), m.dump(2) + "\n");
}

struct CommonOpts {
    std::string L_text = "8";
    double g = 1.0;
    double J = 0.0;      // 0 -> derived from C6 and a
    double a_um = 7.5;
    double C6 = 865723.02;
    std::string state = "down";
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

double effective_J(const CommonOpts& c) {
    if (c.J > 0.0) return c.J;
    return c.C6 / (4.0 * std::pow(c.a_um, 6));
}

// default measurement grid when --times is not given: up to 1.2 x the
// regression surge time, 97 points
std::vector<double> default_grid(int L, double J) {
    const double tmax = 1.2 * (0.26 * L + 0.078) / J;
    std::vector<double> ts;
    for (int i = 0; i <= 96; ++i) ts.push_back(tmax * i / 96.0);
    return ts;
}

int cmd_reference(const CommonOpts& c, const std::string& times_text) {
    const auto Ls = parse_L_list(c.L_text);
    const double J = effective_J(c);
    const fs::path out(c.out_dir);
    nlohmann::json params{{"L", c.L_text}, {"g", c.g}, {"J_rad_per_us", J},
                          {"state", c.state}, {"times", times_text}, {"out", c.out_dir}};
    for (int L : Ls) {
        QuenchSpec spec;
        spec.L = L;
        spec.g = c.g;
        spec.J = J;
        spec.initial_state = initial_state_from_string(c.state);
        spec.time_grid = times_text.empty() ? default_grid(L, J)
                                            : parse_double_list(times_text);
        spec.validate();
        const auto rows = reference_table(spec);
        atomic_write((out / ("reference_L" + std::to_string(L) + ".csv")).string(),
                     reference_table_csv(spec, rows));
        atomic_write((out / ("reference_L" + std::to_string(L) + ".json")).string(),
                     reference_table_json(spec, rows).dump(2) + "\n");
        atomic_write((out / ("spacetime_L" + std::to_string(L) + ".csv")).string(),
                     spacetime_csv(spec, rows));
    }
    write_manifest(out, "reference", params);
    return kOk;
}

int cmd_surge(const CommonOpts& c) {
    const auto Ls = parse_L_list(c.L_text);
    const double J = effective_J(c);
    const InitialState state = initial_state_from_string(c.state);
    const fs::path out(c.out_dir);

    SurgeLookup lut;
    std::vector<SurgeTableRow> rows;
    std::vector<std::pair<double, double>> pts;
    for (int L : Ls) {
        QuenchSpec spec;
        spec.L = L;
        spec.g = c.g;
        spec.J = J;
        spec.initial_state = state;
        const auto r = numeric_surge(spec);
        lut.exact_Jt[L] = J * r.t_star;
        pts.push_back({static_cast<double>(L), J * r.t_star});
        rows.push_back({L, J * r.t_star, 0.0, 0.0, r.peak_height, J * r.peak_width_75});
    }
    if (pts.size() >= 3) lut.fit = surge_regression(pts);
    const double tau = surge_estimate(std::min(std::max(c.g, 1e-6), 1.0), 0.5);
    for (auto& r : rows) {
        r.Jt_star_regression = lut.fit.slope * r.L + lut.fit.intercept;
        r.Jt_star_analytic = tau * J * fermi_time(r.L, c.g, J);
    }
    atomic_write((out / "surge_table.csv").string(), surge_table_csv(rows));
    atomic_write((out / "surge_lookup.json").string(),
                 surge_lookup_to_json(lut).dump(2) + "\n");
    write_manifest(out, "surge",
                   {{"L", c.L_text}, {"g", c.g}, {"J_rad_per_us", J}, {"state", c.state},
                    {"out", c.out_dir}});
    return kOk;
}

int cmd_sample(const CommonOpts& c, double t_us, bool t_from_surge, int shots,
               const std::string& noise_preset, NoiseParams noise) {
    const auto Ls = parse_L_list(c.L_text);
    const fs::path out(c.out_dir);
    if (noise_preset == "none") noise = NoiseParams::none();
    else if (noise_preset != "appendix-b")
        throw ArgumentError("sample: noise preset must be none|appendix-b");
    noise.validate();
    if (t_us <= 0.0 && !t_from_surge)
        throw ArgumentError("sample: give --t or --t-star");

    for (int L : Ls) {
        QuenchSpec spec;
        spec.L = L;
        spec.g = c.g;
        spec.J = effective_J(c);
        spec.initial_state = initial_state_from_string(c.state);
        if (spec.initial_state != InitialState::Down)
            throw ArgumentError("sample: the device protocol prepares the down state");
        const RydbergParams p = ising_to_rydberg(spec, c.C6, c.a_um);
        double t = t_us;
        if (t_from_surge) t = numeric_surge(spec).t_star;
        ShotRecordSet rec =
            noisy_shot_sampler(p, noise, t, shots, c.seed + static_cast<std::uint64_t>(L));
        write_shot_records(rec, (out / ("shots_L" + std::to_string(L) + ".txt")).string());
    }
    write_manifest(out, "sample",
                   {{"L", c.L_text}, {"g", c.g}, {"a_um", c.a_um}, {"C6", c.C6},
                    {"t_us", t_us}, {"t_from_surge", t_from_surge}, {"shots", shots},
                    {"seed", c.seed}, {"noise_preset", noise_preset},
                    {"p_fn", noise.p_fn}, {"p_fp", noise.p_fp}, {"p_prep", noise.p_prep},
                    {"sigma_r_xy", noise.sigma_r_xy}, {"sigma_r_z", noise.sigma_r_z},
                    {"sigma_omega_rel", noise.sigma_omega_rel},
                    {"sigma_delta", noise.sigma_delta}, {"out", c.out_dir}});
    return kOk;
}

std::vector<double> reference_g2_at(const fs::path& ref_dir, int L, double t_us) {
    const fs::path j = ref_dir / ("reference_L" + std::to_string(L) + ".json");
    if (!fs::exists(j)) throw FormatError("score: missing reference table " + j.string());
    std::ifstream in(j);
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, true);
    QuenchSpec spec;
    const auto rows = reference_rows_from_json(doc, &spec);
    std::vector<double> g2(L / 2, 0.0);
    double best = 1e300;
    for (const auto& r : rows) best = std::min(best, std::abs(r.t_us - t_us));
    if (best > 1e-6)
        throw FormatError("score: reference table for L=" + std::to_string(L) +
                          " has no row at t=" + std::to_string(t_us) +
                          " us (closest is " + std::to_string(best) + " us away)");
    for (const auto& r : rows)
        if (std::abs(r.t_us - t_us) == best && r.ell >= 1 && r.ell <= L / 2)
            g2[r.ell - 1] = r.g2_connected;
    return g2;
}

int cmd_score(const std::string& records_dir, const std::string& reference_dir,
              const std::string& eps_text, bool mitigate, double p_fp, double p_fn,
              const std::string& policy_text, const std::string& exclude_text,
              const std::string& out_dir) {
    const fs::path out(out_dir);
    const std::vector<double> eps_list = parse_double_list(eps_text);
    ScorePolicy policy;
    if (policy_text == "lenient") policy = ScorePolicy::Lenient;
    else if (policy_text == "strict") policy = ScorePolicy::Strict;
    else throw ArgumentError("policy must be strict|lenient");
    std::vector<int> exclude;
    if (!exclude_text.empty()) exclude = parse_L_list(exclude_text);

    std::map<int, P2Score> p2_per_L;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(records_dir))
        if (entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        ShotRecordSet rec = read_shot_records(f.string());
        CorrelatorEstimates est = estimate_correlators(rec);
        if (mitigate) est = readout_mitigate(est, p_fp, p_fn);
        const auto theory = reference_g2_at(reference_dir, rec.L, rec.t_us);
        p2_per_L[rec.L] = p2_score(est.g2, theory, rec.L);
    }
    if (p2_per_L.empty())
        throw FormatError("score: no .txt shot records found in " + records_dir);

    std::vector<ScoreReport> reports;
    std::vector<VolumetricCell> all_cells;
    for (double eps : eps_list) {
        ScoreReport rep = mbqs_score(p2_per_L, eps, policy, exclude);
        rep.mitigated = mitigate;
        if (mitigate) rep.mitigation_pfp_pfn = {p_fp, p_fn};
        all_cells.insert(all_cells.end(), rep.cells.begin(), rep.cells.end());
        reports.push_back(std::move(rep));
    }
    atomic_write((out / "score_report.json").string(),
                 score_report_to_json(reports).dump(2) + "\n");
    atomic_write((out / "volumetric.csv").string(), volumetric_csv(all_cells));
    write_manifest(out, "score",
                   {{"records", records_dir}, {"reference", reference_dir},
                    {"epsilon", eps_text}, {"mitigate", mitigate}, {"p_fp", p_fp},
                    {"p_fn", p_fn}, {"policy", policy_text}, {"exclude_L", exclude_text},
                    {"out", out_dir}});
    for (const auto& rep : reports)
        std::cout << "epsilon=" << rep.epsilon << " S=" << rep.S
                  << (rep.S_lower_bound ? " (lower bound)" : "") << "\n";
    return kOk;
}

int cmd_noise_fit(const std::string& gamma_text, const std::string& L_text,
                  const std::string& g_text, double epsilon, const std::string& out_dir) {
    const auto gammas = parse_double_list(gamma_text);
    const auto Ls = parse_L_list(L_text);
    const auto gs = parse_double_list(g_text);
    const fs::path out(out_dir);

    std::vector<DephasingSample> samples;
    std::ostringstream eta_csv;
    eta_csv << "# antipodal-peak suppression eta = max_t g2(gamma) / max_t g2(0)\n";
    eta_csv << "L,g,gamma,eta\n";
    for (int L : Ls) {
        for (double g : gs) {
            const double J = 1.0;
            const DenseHamiltonian H = build_ising_ring(L, g, J);
            const Eigen::VectorXcd psi0 = dense_initial_state(L, InitialState::Down);
            const double tmax = 1.3 * (0.26 * L + 0.078) / J;
            std::vector<double> grid;
            for (double t = 0.0; t <= tmax; t += 0.02 / J) grid.push_back(t);

            EdEvolver U(H);
            double clean = 0.0;
            for (double t : grid) {
                const auto obs = observables(U(psi0, t), L);
                double g2 = 0.0;
                for (int i = 0; i < L; ++i) g2 += obs.connected(i, (i + L / 2) % L);
                clean = std::max(clean, g2 / L);
            }
            for (double gamma : gammas) {
                LindbladEvolver lb(H, gamma);
                double noisy = 0.0;
                lb.run(psi0, grid, [&](std::size_t, const Eigen::MatrixXcd& rho) {
                    const auto obs = observables_rho(rho, L);
                    double g2 = 0.0;
                    for (int i = 0; i < L; ++i) g2 += obs.connected(i, (i + L / 2) % L);
                    noisy = std::max(noisy, g2 / L);
                });
                const double eta = noisy / clean;
                samples.push_back({gamma, g, L, eta});
                eta_csv << L << ',' << g << ',' << gamma << ',' << eta << "\n";
            }
        }
    }
    const double beta = dephasing_fit(samples);
    nlohmann::json j;
    j["beta"] = beta;
    j["epsilon"] = epsilon;
    nlohmann::json pred = nlohmann::json::object();
    for (double gamma : gammas)
        pred[std::to_string(gamma)] = predicted_score(gamma, epsilon, beta);
    j["predicted_S"] = pred;
    atomic_write((out / "noise_fit.json").string(), j.dump(2) + "\n");
    atomic_write((out / "eta_table.csv").string(), eta_csv.str());
    write_manifest(out, "noise-fit",
                   {{"gamma", gamma_text}, {"L", L_text}, {"g", g_text},
                    {"epsilon", epsilon}, {"out", out_dir}});
    std::cout << "beta=" << beta << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"many-body quantum score benchmark pipeline"};
    app.set_config("--config", "", "flat key=value config file; flags override");
    app.require_subcommand(1);

    CommonOpts c;
    std::string times_text;
    double t_us = 0.0;
    bool t_from_surge = false;
    int shots = 1000;
    std::string noise_preset = "appendix-b";
    NoiseParams noise;
    std::string records_dir, reference_dir, eps_text = "0.5";
    bool mitigate = false;
    double p_fp = 0.01, p_fn = 0.07;
    std::string policy_text = "strict", exclude_text;
    std::string gamma_text = "0.02,0.05,0.1,0.2", g_text = "0.5,1.0";
    double epsilon = 0.5;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--L", c.L_text, "system sizes: '6..20', '4,6,8' or a single L");
        sub->add_option("--g", c.g, "transverse-field ratio");
        sub->add_option("--J", c.J, "coupling in rad/us (default: C6/(4 a^6))");
        sub->add_option("--a-um", c.a_um, "interatomic distance in um");
        sub->add_option("--C6", c.C6, "van der Waals coefficient in rad um^6/us");
        sub->add_option("--state", c.state, "initial state: plus|down|afm");
        sub->add_option("--seed", c.seed, "random seed");
        sub->add_option("--out", c.out_dir, "output directory");
    };

    auto* ref = app.add_subcommand("reference", "exact correlation tables");
    add_common(ref);
    ref->add_option("--times", times_text, "comma-separated times in us");

    auto* surge = app.add_subcommand("surge", "surge-time table and regression");
    add_common(surge);

    auto* sample = app.add_subcommand("sample", "synthetic device shots");
    add_common(sample);
    sample->add_option("--t", t_us, "measurement time in us");
    sample->add_flag("--t-star", t_from_surge, "measure at the numeric surge time");
    sample->add_option("--shots", shots, "shots per system size");
    sample->add_option("--noise-preset", noise_preset, "none|appendix-b");
    sample->add_option("--p-prep", noise.p_prep, "preparation error probability");
    sample->add_option("--p-fn", noise.p_fn, "false-negative readout probability");
    sample->add_option("--p-fp", noise.p_fp, "false-positive readout probability");
    sample->add_option("--sigma-r-xy", noise.sigma_r_xy, "in-plane position noise (um)");
    sample->add_option("--sigma-r-z", noise.sigma_r_z, "axial position noise (um)");
    sample->add_option("--sigma-omega-rel", noise.sigma_omega_rel,
                       "relative amplitude fluctuation");
    sample->add_option("--sigma-delta", noise.sigma_delta, "detuning fluctuation (rad/us)");

    auto* score = app.add_subcommand("score", "score shot records against references");
    score->add_option("--records", records_dir, "directory of shot record files")
        ->required();
    score->add_option("--reference", reference_dir, "directory of reference tables")
        ->required();
    score->add_option("--epsilon", eps_text, "comma-separated thresholds");
    score->add_flag("--mitigate", mitigate, "apply readout mitigation");
    score->add_option("--p-fp", p_fp, "false-positive probability for mitigation");
    score->add_option("--p-fn", p_fn, "false-negative probability for mitigation");
    score->add_option("--policy", policy_text, "strict|lenient volumetric policy");
    score->add_option("--exclude-L", exclude_text, "system sizes excluded from S");
    score->add_option("--out", c.out_dir, "output directory");

    auto* nf = app.add_subcommand("noise-fit", "dephasing-law fit and predicted score");
    nf->add_option("--gamma", gamma_text, "comma-separated dephasing rates (1/us)");
    nf->add_option("--L", c.L_text, "system sizes");
    nf->add_option("--g", g_text, "comma-separated field ratios");
    nf->add_option("--epsilon", epsilon, "threshold for the predicted score");
    nf->add_option("--out", c.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ref->parsed()) return cmd_reference(c, times_text);
        if (surge->parsed()) return cmd_surge(c);
        if (sample->parsed())
            return cmd_sample(c, t_us, t_from_surge, shots, noise_preset, noise);
        if (score->parsed())
            return cmd_score(records_dir, reference_dir, eps_text, mitigate, p_fp, p_fn,
                             policy_text, exclude_text, c.out_dir);
        if (nf->parsed())
            return cmd_noise_fit(gamma_text, c.L_text, g_text, epsilon, c.out_dir);
    } catch (const ArgumentError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kFormat;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCompute;
    }
    return kUsage;
}
