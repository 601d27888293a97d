// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyplab/errors.hpp"
#include "hyplab/matrix.hpp"

namespace hyplab::report {

using experiments::ExperimentConfig;
using experiments::ExperimentReport;
using experiments::Kind;
using json = nlohmann::ordered_json;

std::optional<Format> parse_format(std::string_view name)
{
    if (name == "json")
        return Format::Json;
    if (name == "csv")
        return Format::Csv;
    return std::nullopt;
}

std::string_view format_name(Format f)
{
    return f == Format::Json ? "json" : "csv";
}

namespace {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string reference_name(reference::CdfKind kind)
{
    return reference::ReferenceCdf(kind).name();
}

}  // namespace

std::vector<std::string> config_to_args(const ExperimentConfig& c)
{
    std::vector<std::string> a = {std::string(experiments::kind_name(c.kind)),
                                  "--n",
                                  std::to_string(c.n),
                                  "--trials",
                                  std::to_string(c.trials),
                                  "--dist",
                                  c.dist.token(),
                                  "--seed",
                                  std::to_string(c.master_seed)};
    auto add = [&](const char* flag, std::string value) {
        a.emplace_back(flag);
        a.push_back(std::move(value));
    };
    switch (c.kind) {
    case Kind::DistanceConcentration:
        if (c.codim)
            add("--codim", std::to_string(c.codim));
        break;
    case Kind::InnerProduct:
        add("--u", std::string(experiments::fixed_vector_name(c.fixed_vector)));
        break;
    case Kind::Eigenvector:
        add("--eigen-tol", fmt17(c.eigen_tol));
        add("--eigen-max-iter", std::to_string(c.eigen_max_iter));
        break;
    case Kind::NormalCoords:
        add("--d", std::to_string(c.tuple_size));
        break;
    case Kind::UpperTail: {
        std::string grid;
        for (std::size_t i = 0; i < c.t_grid.size(); ++i)
            grid += (i ? "," : "") + fmt17(c.t_grid[i]);
        add("--t-grid", grid);
        break;
    }
    case Kind::NegSecondMoment:
        if (c.cols)
            add("--cols", std::to_string(c.cols));
        break;
    default:
        break;
    }
    if (c.reference)
        add("--reference", reference_name(*c.reference));
    if (c.ks_threshold)
        add("--ks-threshold", fmt17(*c.ks_threshold));
    if (!c.calibration_file.empty())
        add("--calibration", c.calibration_file);
    if (!c.dump_dir.empty())
        add("--dump-dir", c.dump_dir);
    return a;
}

namespace {

//---------------------------------------------------------------------------//
// Deterministic JSON emitter (nlohmann prints shortest round-trip floats;
// reports pin 17 significant digits instead)
//---------------------------------------------------------------------------//

void emit(std::ostream& os, const json& j, int indent)
{
    const std::string pad(std::size_t(indent + 2), ' ');
    const std::string close_pad(std::size_t(indent), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first)
                os << ",\n";
            first = false;
            os << pad << json(key).dump() << ": ";
            emit(os, value, indent + 2);
        }
        os << '\n' << close_pad << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Numeric arrays stay on one line.
        bool flat = true;
        for (const auto& v : j)
            flat = flat && (v.is_number() || v.is_null() || v.is_string());
        if (flat) {
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    os << ", ";
                emit(os, j[i], indent);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                os << ",\n";
            os << pad;
            emit(os, j[i], indent + 2);
        }
        os << '\n' << close_pad << ']';
        return;
    }
    case json::value_t::number_float: {
        double x = j.get<double>();
        if (std::isfinite(x))
            os << fmt17(x);
        else
            os << "null";
        return;
    }
    default:
        os << j.dump();
        return;
    }
}

json number(double x)
{
    return json(x);
}

json config_json(const ExperimentConfig& c)
{
    json j = json::object();
    j["kind"] = std::string(experiments::kind_name(c.kind));
    j["n"] = c.n;
    j["trials"] = c.trials;
    j["dist"] = c.dist.token();
    j["field"] = std::string(field_name(c.dist.field()));
    j["seed"] = c.master_seed;
    switch (c.kind) {
    case Kind::DistanceConcentration:
        j["codim"] = c.effective_codim();
        break;
    case Kind::InnerProduct:
        j["fixed_vector"] = std::string(experiments::fixed_vector_name(c.fixed_vector));
        break;
    case Kind::Eigenvector:
        j["eigen_tol"] = number(c.eigen_tol);
        j["eigen_max_iter"] = c.eigen_max_iter;
        break;
    case Kind::NormalCoords:
        j["d"] = c.tuple_size;
        break;
    case Kind::UpperTail:
        j["t_grid"] = c.t_grid;
        break;
    case Kind::NegSecondMoment:
        j["cols"] = c.effective_cols();
        break;
    default:
        break;
    }
    if (c.reference)
        j["reference"] = reference_name(*c.reference);
    if (c.ks_threshold)
        j["ks_threshold"] = number(*c.ks_threshold);
    j["args"] = config_to_args(c);
    return j;
}

json check_json(const experiments::CheckResult& c, const char* value_key)
{
    json j = json::object();
    j["name"] = c.name;
    j[value_key] = number(c.value);
    j["relation"] = c.relation;
    j["threshold"] = number(c.threshold);
    j["pass"] = c.pass;
    return j;
}

json histogram_json(const stats::Histogram& h)
{
    json j = json::object();
    j["bin_edges"] = h.bin_edges;
    j["counts"] = h.counts;
    j["density"] = h.density;
    j["below"] = h.below;
    j["above"] = h.above;
    j["total"] = h.total;
    return j;
}

json report_json(const ExperimentReport& r)
{
    json j = json::object();
    j["config"] = config_json(r.config);

    json summary = json::object();
    for (const auto& [name, s] : r.summary) {
        json e = json::object();
        e["count"] = s.count;
        e["mean"] = number(s.mean);
        e["std"] = number(s.stddev);
        e["min"] = number(s.min);
        e["q01"] = number(s.q01);
        e["q10"] = number(s.q10);
        e["q50"] = number(s.q50);
        e["q90"] = number(s.q90);
        e["q99"] = number(s.q99);
        e["max"] = number(s.max);
        summary[name] = e;
    }
    j["summary"] = summary;

    json ks = json::array();
    for (const auto& c : r.ks_results)
        ks.push_back(check_json(c, "statistic"));
    j["ks_results"] = ks;

    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back(check_json(c, "value"));
    j["checks"] = checks;

    if (!r.series.empty()) {
        json series = json::object();
        for (const auto& [name, v] : r.series)
            series[name] = v;
        j["series"] = series;
    }
    if (!r.calibration_source.empty()) {
        json cal = json::object();
        cal["source"] = r.calibration_source;
        json th = json::object();
        for (const auto& [name, v] : r.calibration.values)
            th[name] = number(v);
        cal["thresholds"] = th;
        j["calibration"] = cal;
    }
    if (!r.companion_statistics.empty()) {
        json comp = json::object();
        comp["dist"] = rng::DistSpec::gaussian(r.config.dist.field()).token();
        comp["trials"] = r.config.trials;
        comp["discarded"] = r.companion_discarded;
        j["companion"] = comp;
    }

    json disc = json::object();
    disc["count"] = r.discarded;
    disc["fraction"] = number(double(r.discarded) / double(r.config.trials));
    json reasons = json::object();
    for (const auto& [name, count] : r.discard_reasons)
        reasons[name] = count;
    disc["reasons"] = reasons;
    disc["degenerate"] = r.degenerate;
    j["discarded"] = disc;

    j["pass"] = r.pass;

    if (!r.histograms.empty()) {
        json hs = json::object();
        for (const auto& [name, h] : r.histograms)
            hs[name] = histogram_json(h);
        j["histograms"] = hs;
    }
    return j;
}

std::ofstream open_for_write(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    return os;
}

void finish(std::ofstream& os, const std::string& path)
{
    os.close();
    if (!os)
        fail(ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace

std::string to_json(const ExperimentReport& report)
{
    std::ostringstream os;
    emit(os, report_json(report), 0);
    os << '\n';
    return os.str();
}

std::vector<std::string> write_report(const ExperimentReport& report, const std::string& path, Format format)
{
    if (path.empty())
        fail(ErrorCode::Io, "empty output path");
    std::vector<std::string> written;
    if (format == Format::Json) {
        auto os = open_for_write(path);
        os << to_json(report);
        finish(os, path);
        written.push_back(path);
        return written;
    }

    std::string prefix = path;
    if (prefix.size() > 4 && prefix.compare(prefix.size() - 4, 4, ".csv") == 0)
        prefix.resize(prefix.size() - 4);

    for (const auto& [name, values] : report.statistics) {
        std::string file = prefix + "_" + name + ".csv";
        auto os = open_for_write(file);
        os << "trial,value\n";
        for (std::size_t i = 0; i < values.size(); ++i)
            os << report.kept_trials[i] << ',' << format_scalar(values[i]) << '\n';
        finish(os, file);
        written.push_back(file);
    }
    for (const auto& [name, h] : report.histograms) {
        std::string file = prefix + "_hist_" + name + ".csv";
        auto os = open_for_write(file);
        stats::write_histogram_csv(os, h);
        finish(os, file);
        written.push_back(file);
    }
    std::string file = prefix + "_checks.csv";
    auto os = open_for_write(file);
    os << "name,value,relation,threshold,pass\n";
    for (const auto* list : {&report.ks_results, &report.checks})
        for (const auto& c : *list)
            os << c.name << ',' << format_scalar(c.value) << ',' << c.relation << ','
               << format_scalar(c.threshold) << ',' << (c.pass ? "true" : "false") << '\n';
    finish(os, file);
    written.push_back(file);
    return written;
}

}  // namespace hyplab::report
