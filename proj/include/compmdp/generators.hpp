#pragma once

// Benchmark families in the text formats of dsl.hpp. Each generator returns
// file name -> content; the diagram is "<family>.diag".

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

namespace compmdp {

// How often each definition is duplicated under a fresh name.
enum class DiLevel : std::uint8_t { High, Mid, Low };

DiLevel parse_di(const std::string& s);
std::string to_string(DiLevel d);

using GeneratedFiles = std::map<std::string, std::string>;

struct PatrolParams {
    std::size_t tasks = 2;      // tasks per room
    std::size_t rooms = 2;      // rooms per floor
    std::size_t floors = 1;     // floors per building
    std::size_t buildings = 1;  // buildings in the neighborhood
    std::size_t variants = 3;   // distinct task definitions
    DiLevel di = DiLevel::High;
    bool freeze_rooms = false;
    std::uint64_t seed = 1;
};

struct WholesaleParams {
    std::size_t length = 3;      // decision positions per item
    std::size_t items = 4;       // distinct item definitions
    std::size_t dispatches = 4;  // dispatch stages per pipeline
    std::size_t pipelines = 4;   // pipelines in the top-level sequence
    DiLevel di = DiLevel::High;
    bool freeze_dispatch = false;
    std::uint64_t seed = 1;
};

struct PacketsParams {
    std::size_t steps = 100;  // transmission steps per block
    std::size_t blocks = 50;  // blocks in the top-level sequence
    std::size_t variants = 3;
    DiLevel di = DiLevel::High;
    bool freeze_blocks = false;
    std::uint64_t seed = 1;
};

GeneratedFiles generate_patrol(const PatrolParams& p);
GeneratedFiles generate_wholesale(const WholesaleParams& p);
GeneratedFiles generate_packets(const PacketsParams& p);

// Number of name copies per definition: 1 for high, 2 for mid; for low it is
// 3, or 4 for the wholesale family.
std::size_t alias_count(DiLevel d, bool wholesale = false);

// Positions of the flattened patrol diagram.
std::size_t patrol_positions(const PatrolParams& p);

// Seed from COMPMDP_SEED when set, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace compmdp
