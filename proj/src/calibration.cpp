// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hyplab/errors.hpp"
#include "hyplab/experiments.hpp"

namespace hyplab::experiments {

namespace {

using json = nlohmann::ordered_json;

std::string entry_key(Kind kind, std::size_t n)
{
    return std::string(kind_name(kind)) + ":" + std::to_string(n);
}

json read_file(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        fail(ErrorCode::Io, "cannot open calibration file '" + path + "'");
    try {
        json doc = json::parse(is);
        if (!doc.is_object())
            fail(ErrorCode::InvalidConfig, "calibration file '" + path + "' must hold a JSON object");
        return doc;
    } catch (const json::exception& e) {
        fail(ErrorCode::InvalidConfig, "calibration file '" + path + "': " + e.what());
    }
}

}  // namespace

std::optional<CalibrationEntry> load_calibration(const std::string& path, Kind kind, std::size_t n)
{
    json doc = read_file(path);
    auto it = doc.find(entry_key(kind, n));
    if (it == doc.end())
        return std::nullopt;
    try {
        const json& e = *it;
        CalibrationEntry entry{kind, n, Field::Real, 0, 0, {}};
        std::string field = e.at("field").get<std::string>();
        if (field == "complex")
            entry.field = Field::Complex;
        else if (field != "real")
            fail(ErrorCode::InvalidConfig, "calibration entry field must be real or complex");
        entry.trials = e.at("trials").get<std::size_t>();
        entry.seed = e.at("seed").get<std::uint64_t>();
        for (const auto& [name, value] : e.at("thresholds").items())
            entry.thresholds.values[name] = value.get<double>();
        return entry;
    } catch (const json::exception& ex) {
        fail(ErrorCode::InvalidConfig, "calibration file '" + path + "', entry " + entry_key(kind, n) + ": " +
                                           ex.what());
    }
}

void store_calibration(const std::string& path, const CalibrationEntry& entry)
{
    json doc = json::object();
    if (std::filesystem::exists(path))
        doc = read_file(path);

    json e = json::object();
    e["field"] = std::string(field_name(entry.field));
    e["trials"] = entry.trials;
    e["seed"] = entry.seed;
    json th = json::object();
    for (const auto& [name, value] : entry.thresholds.values)
        th[name] = value;
    e["thresholds"] = th;
    doc[entry_key(entry.kind, entry.n)] = e;

    std::ofstream os(path);
    if (!os)
        fail(ErrorCode::Io, "cannot write calibration file '" + path + "'");
    // dump() prints doubles with round-trip precision.
    os << doc.dump(2) << '\n';
    if (!os)
        fail(ErrorCode::Io, "write failed for calibration file '" + path + "'");
}

}  // namespace hyplab::experiments
