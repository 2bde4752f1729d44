// meshsampler: textured mesh -> voxelized colored point cloud.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "meshsampler/pipeline.hpp"

namespace {

using namespace meshsampler;

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

void add_pipeline_flags(CLI::App& cmd, PipelineConfig& cfg, bool& no_vflip, bool& clamp_wrap) {
    cmd.add_option("--points", cfg.sample.n_points, "Number of surface samples")->capture_default_str();
    cmd.add_option("--resolution", cfg.resolution, "Voxel grid resolution R (cube of R^3 cells)")
        ->capture_default_str();
    cmd.add_option("--seed", cfg.sample.seed, "Random seed for AO jitter and surface sampling")
        ->capture_default_str();
    cmd.add_option("--ao-directions", cfg.ao.n_directions, "View directions for the visibility pass")
        ->capture_default_str();
    cmd.add_option("--ao-samples", cfg.ao.samples_per_face, "Sample points per face for the visibility pass")
        ->capture_default_str();
    cmd.add_option("--duplicate-mode", cfg.duplicate_mode, "How coincident faces are matched")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, DuplicateMode>{{"index", DuplicateMode::kByIndex},
                                                 {"position", DuplicateMode::kByPosition}},
            CLI::ignore_case))
        ->default_str("position");
    cmd.add_option("--cull", cfg.cull_policy, "Face removal before sampling")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, CullPolicy>{{"full", CullPolicy::kFull},
                                              {"duplicates-only", CullPolicy::kDuplicatesOnly},
                                              {"off", CullPolicy::kOff}},
            CLI::ignore_case))
        ->default_str("full");
    cmd.add_flag_callback("--cull-duplicates-only", [&cfg] { cfg.cull_policy = CullPolicy::kDuplicatesOnly; },
                          "Same as --cull duplicates-only");
    cmd.add_option("--format", cfg.ply_encoding, "PLY encoding")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, PlyEncoding>{{"ascii", PlyEncoding::kAscii},
                                               {"binary", PlyEncoding::kBinaryLittleEndian}},
            CLI::ignore_case))
        ->default_str("binary");
    cmd.add_option("--texture-filter", cfg.sample.texture_filter, "Texture filtering")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, TextureFilter>{{"nearest", TextureFilter::kNearest},
                                                 {"bilinear", TextureFilter::kBilinear}},
            CLI::ignore_case))
        ->default_str("bilinear");
    cmd.add_flag("--no-vflip", no_vflip, "Do not flip the texture v axis");
    cmd.add_flag("--clamp-wrap", clamp_wrap, "Clamp texture coordinates instead of repeating");
    cmd.add_flag("-v,--verbose", "Log stage timings and warnings");
    cmd.add_flag("-q,--quiet", "Suppress per-file log lines");
}

void finish_config(const CLI::App& cmd, PipelineConfig& cfg, bool no_vflip, bool clamp_wrap) {
    cfg.ao.seed = cfg.sample.seed;
    cfg.sample.flip_v = !no_vflip;
    cfg.sample.wrap = clamp_wrap ? TextureWrap::kClamp : TextureWrap::kRepeat;
    if (cmd.count("--verbose") > 0) cfg.verbosity = 2;
    if (cmd.count("--quiet") > 0) cfg.verbosity = 0;
    cfg.validate();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convert textured OBJ meshes into voxelized colored point clouds"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    bool no_vflip = false;
    bool clamp_wrap = false;

    auto* sample = app.add_subcommand("sample", "Convert one OBJ file to a PLY point cloud");
    sample->add_option("input", cfg.input, "Input OBJ file")->required();
    sample->add_option("-o,--output", cfg.output, "Output PLY file")->required();
    add_pipeline_flags(*sample, cfg, no_vflip, clamp_wrap);
    sample->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();

    auto* batch = app.add_subcommand("batch", "Convert every OBJ under a directory");
    batch->add_option("input", cfg.input, "Input directory")->required();
    batch->add_option("-o,--output", cfg.output, "Output directory")->required();
    add_pipeline_flags(*batch, cfg, no_vflip, clamp_wrap);
    batch->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();

    std::string kind;
    std::string fixture_dir;
    auto* fixture = app.add_subcommand("fixture", "Write a synthetic test mesh with known answers");
    fixture->add_option("kind", kind, "doubled_cube | nested_cubes | textured_quad")->required();
    fixture->add_option("-o,--output", fixture_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sample) {
            finish_config(*sample, cfg, no_vflip, clamp_wrap);
            const ManifestEntry entry = process_file(cfg, cfg.input);
            return entry.ok ? kExitOk : kExitPartial;
        }
        if (*batch) {
            finish_config(*batch, cfg, no_vflip, clamp_wrap);
            std::vector<ManifestEntry> entries;
            try {
                entries = process_batch(cfg);
            } catch (const std::runtime_error& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitUsage;
            }
            for (const auto& e : entries) {
                if (!e.ok) return kExitPartial;
            }
            return kExitOk;
        }
        const auto parsed = parse_fixture_kind(kind);
        if (!parsed) {
            std::cerr << "error: unknown fixture kind '" << kind << "'\n";
            return kExitUsage;
        }
        std::cout << generate_fixture(*parsed, fixture_dir).string() << '\n';
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPartial;
    }
}
