#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbqs/quench_model.hpp"

namespace mbqs {

/// Raw measurement record: metadata plus one bitstring per shot.
/// Bit convention: b = 1 <=> Rydberg-excited <=> n = 1 <=> sz = +1.
struct ShotRecordSet {
    std::string device_id;
    int L = 0;
    double a_um = 0.0;
    double g = 0.0;
    double J = 0.0;  // rad/us
    InitialState initial_state = InitialState::Down;
    double t_us = 0.0;
    std::optional<std::uint64_t> seed;
    std::vector<std::vector<std::uint8_t>> bits;  // n_shots x L

    int n_shots() const { return static_cast<int>(bits.size()); }
    void validate() const;
};

/// File format: first line a JSON metadata object, then one fixed-width
/// 0/1 string of length L per shot.
void write_shot_records(const ShotRecordSet& rec, const std::string& path);
ShotRecordSet read_shot_records(const std::string& path);

} // namespace mbqs
