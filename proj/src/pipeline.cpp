#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "meshsampler/errors.hpp"
#include "meshsampler/geometry.hpp"
#include "meshsampler/parallel.hpp"
#include "meshsampler/pipeline.hpp"
#include "meshsampler/voxel.hpp"

namespace meshsampler {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::mutex log_mutex;

void log_line(const std::string& line) {
    std::lock_guard lock(log_mutex);
    std::cerr << line << '\n';
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Wraps a stage so that any failure carries the stage name.
struct StageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Fn>
auto run_stage(const char* stage, std::vector<std::pair<std::string, double>>& timings, Fn&& fn) {
    const auto start = Clock::now();
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            timings.emplace_back(stage, seconds_since(start));
        } else {
            auto result = fn();
            timings.emplace_back(stage, seconds_since(start));
            return result;
        }
    } catch (const std::exception& e) {
        throw StageFailure(std::string(stage) + ": " + e.what());
    }
}

const char* policy_name(CullPolicy p) {
    switch (p) {
        case CullPolicy::kFull: return "full";
        case CullPolicy::kDuplicatesOnly: return "duplicates-only";
        case CullPolicy::kOff: return "off";
    }
    return "?";
}

}  // namespace

void PipelineConfig::validate() const {
    if (sample.n_points < 1) throw std::invalid_argument("--points must be >= 1");
    if (resolution < 2) throw std::invalid_argument("--resolution must be >= 2");
    if (ao.n_directions < 1) throw std::invalid_argument("--ao-directions must be >= 1");
    if (ao.samples_per_face < 1) throw std::invalid_argument("--ao-samples must be >= 1");
    if (jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
}

ManifestEntry process_file(const PipelineConfig& cfg, const fs::path& path, int threads) {
    if (threads <= 0) threads = cfg.jobs;
    const auto start = Clock::now();
    ManifestEntry entry;
    entry.input = path.string();
    entry.output = cfg.output.string();
    std::vector<std::pair<std::string, double>> timings;
    try {
        Mesh mesh = run_stage("parse", timings, [&] { return load_obj(path, &entry.warnings); });
        entry.faces_before = mesh.faces.size();

        if (cfg.cull_policy != CullPolicy::kOff) {
            const FaceQuality quality = run_stage("ao", timings, [&] {
                const Bvh bvh = build_bvh(mesh_triangles(mesh));
                return compute_face_quality(mesh, bvh, cfg.ao, threads);
            });
            auto culled = run_stage("cull", timings, [&] {
                const auto groups = find_duplicate_groups(mesh, cfg.duplicate_mode);
                return cull_internal_faces(mesh, quality, groups,
                                           {.remove_invisible = cfg.cull_policy == CullPolicy::kFull});
            });
            mesh = std::move(culled.first);
            entry.cull = culled.second;
        }
        entry.faces_after = mesh.faces.size();

        const PointCloud samples = run_stage("sample", timings, [&] { return sample_mesh(mesh, cfg.sample, threads); });
        entry.points = samples.size();
        const PointCloud voxels = run_stage("voxelize", timings, [&] { return voxelize(samples, cfg.resolution); });
        entry.voxels = voxels.size();
        run_stage("write", timings, [&] {
            if (cfg.output.has_parent_path()) fs::create_directories(cfg.output.parent_path());
            save_ply(voxels, cfg.ply_encoding, cfg.output);
        });
        entry.ok = true;
    } catch (const StageFailure& e) {
        entry.error = e.what();
    } catch (const std::exception& e) {
        entry.error = std::string("internal: ") + e.what();
    }
    entry.wall_time_s = seconds_since(start);

    if (cfg.verbosity >= 1) {
        std::ostringstream line;
        line << (entry.ok ? "ok     " : "FAILED ") << path.string();
        if (entry.ok) {
            line << "  faces " << entry.faces_before << "->" << entry.faces_after << "  points " << entry.points
                 << "  voxels " << entry.voxels;
        } else {
            line << "  " << entry.error;
        }
        line << "  " << std::fixed << std::setprecision(2) << entry.wall_time_s << "s";
        if (cfg.verbosity >= 2) {
            for (const auto& [stage, t] : timings) line << "  " << stage << "=" << std::setprecision(3) << t << "s";
            for (const auto& w : entry.warnings) line << "\n  warning: " << w;
        }
        log_line(line.str());
    }
    return entry;
}

std::vector<ManifestEntry> process_batch(const PipelineConfig& cfg) {
    cfg.validate();
    std::error_code ec;
    if (!fs::is_directory(cfg.input, ec)) throw std::runtime_error("input is not a readable directory: " + cfg.input.string());

    std::vector<fs::path> inputs;
    fs::recursive_directory_iterator it(cfg.input, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw std::runtime_error("cannot read " + cfg.input.string() + ": " + ec.message());
    for (const auto& e : it) {
        if (e.is_regular_file() && e.path().extension() == ".obj") inputs.push_back(fs::relative(e.path(), cfg.input));
    }
    std::sort(inputs.begin(), inputs.end());

    fs::create_directories(cfg.output);
    std::vector<ManifestEntry> entries(inputs.size());
    // Files are the primary parallel axis; spare workers go to each file.
    const int file_workers = static_cast<int>(std::min<std::size_t>(cfg.jobs, std::max<std::size_t>(1, inputs.size())));
    const int inner_threads = std::max(1, cfg.jobs / file_workers);
    parallel_for(
        inputs.size(), file_workers,
        [&](std::size_t i) {
            PipelineConfig file_cfg = cfg;
            file_cfg.output = cfg.output / fs::path(inputs[i]).replace_extension(".ply");
            ManifestEntry entry;
            try {
                entry = process_file(file_cfg, cfg.input / inputs[i], inner_threads);
            } catch (const std::exception& e) {
                entry.ok = false;
                entry.error = std::string("internal: ") + e.what();
            }
            entry.input = inputs[i].generic_string();
            entry.output = fs::path(inputs[i]).replace_extension(".ply").generic_string();
            entries[i] = std::move(entry);
        },
        1);

    std::ofstream manifest(cfg.output / "manifest.json", std::ios::binary | std::ios::trunc);
    manifest << manifest_json(cfg, entries).dump(2) << '\n';
    if (!manifest) throw std::runtime_error("cannot write manifest in " + cfg.output.string());
    return entries;
}

nlohmann::ordered_json manifest_json(const PipelineConfig& cfg, const std::vector<ManifestEntry>& entries) {
    using nlohmann::ordered_json;
    ordered_json config;
    config["points"] = cfg.sample.n_points;
    config["resolution"] = cfg.resolution;
    config["seed"] = cfg.sample.seed;
    config["ao_directions"] = cfg.ao.n_directions;
    config["ao_samples"] = cfg.ao.samples_per_face;
    config["duplicate_mode"] = cfg.duplicate_mode == DuplicateMode::kByIndex ? "index" : "position";
    config["cull"] = policy_name(cfg.cull_policy);
    config["format"] = cfg.ply_encoding == PlyEncoding::kAscii ? "ascii" : "binary";
    config["texture_filter"] = cfg.sample.texture_filter == TextureFilter::kNearest ? "nearest" : "bilinear";
    config["vflip"] = cfg.sample.flip_v;
    config["wrap"] = cfg.sample.wrap == TextureWrap::kRepeat ? "repeat" : "clamp";

    ordered_json list = ordered_json::array();
    std::size_t ok = 0;
    for (const auto& e : entries) {
        ordered_json j;
        j["input"] = e.input;
        j["output"] = e.output;
        j["status"] = e.ok ? "ok" : "failed";
        if (!e.ok) j["error"] = e.error;
        j["faces_before"] = e.faces_before;
        j["faces_after"] = e.faces_after;
        j["cull"] = {{"groups_found", e.cull.groups_found},
                     {"faces_removed", e.cull.faces_removed},
                     {"kept_by_tie_break", e.cull.kept_by_tie_break},
                     {"invisible_removed", e.cull.invisible_removed}};
        j["points"] = e.points;
        j["voxels"] = e.voxels;
        j["warnings"] = e.warnings;
        j["wall_time_s"] = e.wall_time_s;
        list.push_back(std::move(j));
        ok += e.ok ? 1 : 0;
    }
    ordered_json root;
    root["config"] = std::move(config);
    root["summary"] = {{"files", entries.size()}, {"ok", ok}, {"failed", entries.size() - ok}};
    root["entries"] = std::move(list);
    return root;
}

}  // namespace meshsampler
