#include "lvn/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <unistd.h>

#include "lvn/core_ops.hpp"

#ifndef LVNKIT_VERSION
#define LVNKIT_VERSION "0.0.0"
#endif

namespace lvn {

std::string tool_version() {
    return LVNKIT_VERSION;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json series_json(const PartialSumSeries& s) {
    Json j;
    j["quantity"] = s.quantity.tag();
    j["basis"] = s.basis;
    j["dims"] = s.ladder.dims;
    j["values"] = s.values;
    return j;
}

} // namespace

Json provenance_json(const Provenance& p) {
    Json j;
    j["tool"] = "lvnkit";
    j["version"] = p.version;
    j["spec_hash"] = p.spec_hash;
    j["seed"] = p.seed;
    j["ladder"] = Json{{"dims", p.ladder.dims}, {"pad_factor", p.ladder.pad_factor}};
    j["tolerances"] = Json{{"conv", p.tolerances.conv_tol}, {"fit", p.tolerances.fit_tol}};
    if (p.include_timestamp) j["generated_at"] = utc_now();
    return j;
}

Json verdict_json(const DomainVerdict& v) {
    Json j;
    j["classification"] = to_string(v.classification);
    if (v.classification == Classification::ConvergentEvidence)
        j["limit_estimate"] = v.limit_estimate;
    else
        j["limit_estimate"] = nullptr;
    j["growth_model"] = to_string(v.growth_model);
    j["gamma"] = v.gamma;
    j["slope_b"] = v.slope_b;
    j["fit_residual"] = v.fit_residual;
    j["series"] = series_json(v.series);
    return j;
}

Json membership_json(const MembershipReport& r) {
    Json j;
    j["invariance"] = verdict_json(r.invariance);
    Json cols = Json::array();
    for (const auto& v : r.invariance_columns) cols.push_back(verdict_json(v));
    j["invariance_columns"] = std::move(cols);
    j["dom_H"] = verdict_json(r.dom_H);
    j["core_D"] = to_string(r.core_D);
    j["core_D_left"] = verdict_json(r.core_D_left);
    j["core_D_right"] = verdict_json(r.core_D_right);
    j["core_D0"] = to_string(r.core_D0);
    j["core_D0_structural"] = r.core_D0_structural;
    Json vecs = Json::array();
    for (const auto& v : r.core_D0_vectors)
        vecs.push_back(Json{{"which", v.which}, {"verdict", verdict_json(v.verdict)}});
    j["core_D0_vectors"] = std::move(vecs);
    j["dom_H2"] = to_string(r.dom_H2);
    j["double_comm"] = verdict_json(r.double_comm);
    Json ccols = Json::array();
    for (const auto& v : r.comm_invariance_columns) ccols.push_back(verdict_json(v));
    j["comm_invariance_columns"] = std::move(ccols);
    if (r.dom_H_eigenbasis)
        j["dom_H_eigenbasis"] = verdict_json(*r.dom_H_eigenbasis);
    else
        j["dom_H_eigenbasis"] = nullptr;
    j["caveats"] = r.caveats;
    return j;
}

Json diagnose_report_json(const Provenance& p, const std::string& hamiltonian_descriptor,
                          const std::string& operator_descriptor, const MembershipReport& r) {
    Json j;
    j["provenance"] = provenance_json(p);
    j["hamiltonian"] = hamiltonian_descriptor;
    j["operator"] = operator_descriptor;
    j["membership"] = membership_json(r);
    return j;
}

namespace {

void append_series_rows(std::string& out, const PartialSumSeries& s, const std::string& column) {
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        out += s.quantity.tag() + "," + s.basis + "," + column + "," +
               std::to_string(s.ladder.dims[i]) + "," + format_g17(s.values[i]) + "\n";
    }
}

} // namespace

std::string series_csv(const MembershipReport& r) {
    std::string out = "quantity,basis,column,N,value\n";
    for (const auto& v : r.invariance_columns)
        append_series_rows(out, v.series, std::to_string(v.series.quantity.column));
    append_series_rows(out, r.dom_H.series, "");
    append_series_rows(out, r.core_D_left.series, "");
    append_series_rows(out, r.core_D_right.series, "");
    append_series_rows(out, r.double_comm.series, "");
    for (const auto& v : r.comm_invariance_columns)
        append_series_rows(out, v.series, std::to_string(v.series.quantity.column));
    for (const auto& v : r.core_D0_vectors) append_series_rows(out, v.verdict.series, v.which);
    if (r.dom_H_eigenbasis) append_series_rows(out, r.dom_H_eigenbasis->series, "");
    return out;
}

std::string trajectory_csv(const EvolutionTrajectory& t) {
    std::string out = "t,trace,hs_norm,purity,dist_to_initial\n";
    for (std::size_t i = 0; i < t.times.size(); ++i) {
        const Matrix& a = t.states[i].entries();
        const double trace = a.trace().real();
        const double purity = (a * a).trace().real();
        const double dist = (a - t.states.front().entries()).norm();
        out += format_g17(t.times[i]) + "," + format_g17(trace) + "," +
               format_g17(hs_norm(t.states[i])) + "," + format_g17(purity) + "," +
               format_g17(dist) + "\n";
    }
    return out;
}

std::string comparison_csv(
    const std::vector<double>& times,
    const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
    std::string out = "t,method,hs_distance_to_ref\n";
    for (const auto& [method, distances] : columns)
        for (std::size_t i = 0; i < times.size(); ++i)
            out += format_g17(times[i]) + "," + method + "," + format_g17(distances[i]) + "\n";
    return out;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    const std::filesystem::path tmp =
        path.parent_path() / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    std::filesystem::rename(tmp, path);
}

} // namespace lvn
