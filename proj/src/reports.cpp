#include "mlnheat/reports.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace mlnheat {
namespace {

using nlohmann::json;

json moderateness_json(const ModerationReport& m) {
    json j;
    j["exponent"] = m.exponent;
    j["fit_quality"] = m.fit_quality;
    if (m.negligible_up_to_q.has_value())
        j["negligible_up_to_q"] = *m.negligible_up_to_q;
    else
        j["negligible_up_to_q"] = nullptr;
    j["epsilons"] = m.epsilons;
    j["norms"] = m.norms;
    return j;
}

json config_header(const ExperimentConfig& cfg) {
    json j;
    j["command"] = command_name(cfg.command);
    j["run_id"] = config_hash(cfg);
    j["seed"] = cfg.seed;
    return j;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string energy_trace_csv(const EnergyTrace& trace) {
    std::string out = "time,l2_sq,grad_w_sq,frac_w_sq,mass_w_sq,total,ut_l2_sq,cg_iterations\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const EnergyBreakdown& e = trace.breakdowns[i];
        out += format_double(trace.times[i]) + ',' + format_double(e.l2_sq) + ',' +
               format_double(e.grad_w_sq) + ',' + format_double(e.frac_w_sq) + ',' +
               format_double(e.mass_w_sq) + ',' + format_double(e.total) + ',' +
               format_double(trace.ut_l2_sq[i]) + ',' +
               std::to_string(trace.cg_iterations[i]) + '\n';
    }
    return out;
}

std::string snapshots_csv(const SolveResult& run) {
    std::string out = "t,values...\n";
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        out += format_double(run.snapshot_times[i]);
        for (double v : run.snapshots[i].values()) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string net_csv(const NetReport& rep) {
    std::string out =
        "epsilon,omega,sup_t_h1_sq,sup_t_hs_sq,C_eps,apriori_lhs_max,apriori_rhs,"
        "apriori_satisfied,cg_total_iters,failed\n";
    for (const auto& r : rep.per_eps) {
        out += format_double(r.epsilon) + ',' + format_double(r.omega) + ',' +
               format_double(r.sup_t_h1_sq) + ',' + format_double(r.sup_t_hs_sq) + ',' +
               format_double(r.C_eps) + ',' + format_double(r.apriori_lhs_max) + ',' +
               format_double(r.apriori_rhs) + ',' + (r.apriori_satisfied ? "1" : "0") + ',' +
               std::to_string(r.cg_total_iters) + ',' + (r.failed ? "1" : "0") + '\n';
    }
    return out;
}

std::string uniqueness_csv(const MollifierSpec& m, const UniquenessReport& rep) {
    std::string out = "epsilon,omega,diff_norm\n";
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        out += format_double(rep.epsilons[i]) + ',' +
               format_double(m.omega(rep.epsilons[i])) + ',' +
               format_double(rep.diff_norms[i]) + '\n';
    return out;
}

std::string consistency_csv(const MollifierSpec& m, const ConsistencyReport& rep) {
    std::string out = "epsilon,omega,error_c_l2,error_l2_h1\n";
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        out += format_double(rep.epsilons[i]) + ',' +
               format_double(m.omega(rep.epsilons[i])) + ',' +
               format_double(rep.errors_c_l2[i]) + ',' +
               format_double(rep.errors_l2_h1[i]) + '\n';
    return out;
}

std::string net_json(const ExperimentConfig& cfg, const NetReport& rep) {
    json j = config_header(cfg);
    json per = json::array();
    for (const auto& r : rep.per_eps) {
        json e;
        e["epsilon"] = r.epsilon;
        e["omega"] = r.omega;
        e["sup_t_h1_sq"] = r.sup_t_h1_sq;
        e["sup_t_hs_sq"] = r.sup_t_hs_sq;
        e["C_eps"] = r.C_eps;
        e["apriori_lhs_max"] = r.apriori_lhs_max;
        e["apriori_rhs"] = r.apriori_rhs;
        e["apriori_satisfied"] = r.apriori_satisfied;
        e["cg_total_iters"] = r.cg_total_iters;
        e["failed"] = r.failed;
        if (r.failed) e["error"] = r.error;
        per.push_back(std::move(e));
    }
    j["per_eps"] = std::move(per);
    j["moderateness"] = moderateness_json(rep.moderateness);
    j["verdict"] = rep.verdict == NetVerdict::moderate ? "moderate" : "not_moderate";
    return j.dump(2) + "\n";
}

std::string uniqueness_json(const ExperimentConfig& cfg, const UniquenessReport& rep) {
    json j = config_header(cfg);
    j["perturbation"] = perturbation_name(rep.perturbation);
    j["epsilons"] = rep.epsilons;
    j["diff_norms"] = rep.diff_norms;
    j["fitted_slope"] = rep.fitted_slope;
    j["bit_identical"] = rep.bit_identical;
    json per_q = json::array();
    for (const auto& o : rep.per_q) per_q.push_back({{"q", o.q}, {"passes", o.passes}});
    j["per_q"] = std::move(per_q);
    return j.dump(2) + "\n";
}

std::string consistency_json(const ExperimentConfig& cfg, const ConsistencyReport& rep) {
    json j = config_header(cfg);
    j["epsilons"] = rep.epsilons;
    j["errors_c_l2"] = rep.errors_c_l2;
    j["errors_l2_h1"] = rep.errors_l2_h1;
    if (rep.fitted_rate.has_value())
        j["fitted_rate"] = *rep.fitted_rate;
    else
        j["fitted_rate"] = nullptr;
    return j.dump(2) + "\n";
}

std::string solve_json(const ExperimentConfig& cfg, const SolveResult& run) {
    json j = config_header(cfg);
    j["steps"] = run.trace.times.size() - 1;
    j["final_time"] = run.trace.times.back();
    j["snapshots"] = run.snapshots.size();
    j["final_l2_sq"] = run.trace.breakdowns.back().l2_sq;
    j["final_total_energy"] = run.trace.breakdowns.back().total;
    long cg = 0;
    for (int it : run.trace.cg_iterations) cg += it;
    j["cg_total_iters"] = cg;
    return j.dump(2) + "\n";
}

std::string check_json(const ExperimentConfig& cfg, const std::vector<PropertyResult>& props) {
    json j = config_header(cfg);
    json arr = json::array();
    bool all = true;
    for (const auto& p : props) {
        arr.push_back({{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
        all = all && p.passed;
    }
    j["properties"] = std::move(arr);
    j["all_passed"] = all;
    return j.dump(2) + "\n";
}

void write_report_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path d(dir);
    std::error_code ec;
    if (!fs::is_directory(d, ec))
        throw IoError("output directory does not exist: " + dir);
    const fs::path p = d / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    out << content;
    if (!out) throw IoError("short write to " + p.string());
}

} // namespace mlnheat
