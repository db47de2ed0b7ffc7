#include "mbqs/shot_record.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mbqs/errors.hpp"
#include "mbqs/tables.hpp"

namespace mbqs {

void write_shot_records(const ShotRecordSet& rec, const std::string& path) {
    rec.validate();
    nlohmann::json meta;
    meta["device_id"] = rec.device_id;
    meta["L"] = rec.L;
    meta["a_um"] = rec.a_um;
    meta["g"] = rec.g;
    meta["J_rad_per_us"] = rec.J;
    meta["initial_state"] = to_string(rec.initial_state);
    meta["t_us"] = rec.t_us;
    meta["n_shots"] = rec.n_shots();
    if (rec.seed) meta["seed"] = *rec.seed;

    std::ostringstream out;
    out << meta.dump() << "\n";
    for (const auto& row : rec.bits) {
        for (int j = 0; j < rec.L; ++j) out << (row[j] ? '1' : '0');
        out << "\n";
    }
    atomic_write(path, out.str());
}

ShotRecordSet read_shot_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("read_shot_records: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("read_shot_records: empty file " + path);

    ShotRecordSet rec;
    try {
        const nlohmann::json meta = nlohmann::json::parse(line);
        rec.device_id = meta.value("device_id", std::string("unknown"));
        rec.L = meta.at("L").get<int>();
        rec.a_um = meta.value("a_um", 0.0);
        rec.g = meta.value("g", 0.0);
        rec.J = meta.value("J_rad_per_us", 0.0);
        rec.initial_state = initial_state_from_string(
            meta.value("initial_state", std::string("down")));
        rec.t_us = meta.at("t_us").get<double>();
        rec.seed = meta.contains("seed")
                       ? std::optional<std::uint64_t>(meta["seed"].get<std::uint64_t>())
                       : std::nullopt;
        const int declared = meta.value("n_shots", -1);
        rec.bits.reserve(declared > 0 ? declared : 0);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("read_shot_records: bad metadata line in " + path + ": " + e.what());
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (static_cast<int>(line.size()) != rec.L)
            throw FormatError("read_shot_records: line " + std::to_string(lineno) +
                              " has length " + std::to_string(line.size()) + ", expected L = " +
                              std::to_string(rec.L));
        std::vector<std::uint8_t> row(rec.L);
        for (int j = 0; j < rec.L; ++j) {
            if (line[j] == '0') row[j] = 0;
            else if (line[j] == '1') row[j] = 1;
            else
                throw FormatError("read_shot_records: non-binary character at line " +
                                  std::to_string(lineno));
        }
        rec.bits.push_back(std::move(row));
    }
    rec.validate();
    return rec;
}

} // namespace mbqs
