#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "meshsampler/ao.hpp"
#include "meshsampler/cull.hpp"
#include "meshsampler/mesh_io.hpp"
#include "meshsampler/sample.hpp"

namespace meshsampler {

enum class CullPolicy { kFull, kDuplicatesOnly, kOff };

struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output;
    int resolution = 256;
    AoConfig ao;
    SampleConfig sample;  // sample.n_points is the point count
    DuplicateMode duplicate_mode = DuplicateMode::kByPosition;
    CullPolicy cull_policy = CullPolicy::kFull;
    PlyEncoding ply_encoding = PlyEncoding::kBinaryLittleEndian;
    int jobs = 1;
    int verbosity = 1;  // 0 silent, 1 one line per file, 2 adds stage timings

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct ManifestEntry {
    std::string input;
    std::string output;
    bool ok = false;
    std::string error;  // "<stage>: <message>" when failed
    std::size_t faces_before = 0;
    std::size_t faces_after = 0;
    CullReport cull;
    std::size_t points = 0;
    std::size_t voxels = 0;
    double wall_time_s = 0.0;
    std::vector<std::string> warnings;
};

/// Runs parse, AO, cull, sample, voxelize and write for one OBJ file,
/// writing to cfg.output. Errors are captured in the returned entry.
ManifestEntry process_file(const PipelineConfig& cfg, const std::filesystem::path& path, int threads = 0);

/// Processes every *.obj under cfg.input (sorted), mirroring the tree into
/// cfg.output, and writes manifest.json there. Entry paths are relative to
/// the input/output roots. Throws std::runtime_error if the input directory
/// cannot be read.
std::vector<ManifestEntry> process_batch(const PipelineConfig& cfg);

nlohmann::ordered_json manifest_json(const PipelineConfig& cfg, const std::vector<ManifestEntry>& entries);

enum class FixtureKind { kDoubledCube, kNestedCubes, kTexturedQuad };

std::optional<FixtureKind> parse_fixture_kind(std::string_view name);
std::string_view fixture_name(FixtureKind kind);

/// Writes <name>.obj, <name>.mtl and any texture into `dir`; returns the OBJ path.
std::filesystem::path generate_fixture(FixtureKind kind, const std::filesystem::path& dir);

}  // namespace meshsampler
