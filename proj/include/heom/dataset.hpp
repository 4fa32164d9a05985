#ifndef heom_dataset_hpp
#define heom_dataset_hpp

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heom/engine.hpp"
#include "heom/features.hpp"
#include "heom/sampling.hpp"

namespace heom {

/// On-disk dataset layout (format_version 1), one directory:
///
///   manifest.json  generation parameters and checksum_sha256
///   labels.f64     little-endian doubles, [n_samples x 2(N-1)] row-major
///   features.f64   little-endian doubles, [n_samples x n_steps x (2N-1)] row-major
///   rejects.json   samples whose simulation diverged; their feature rows are NaN
///
/// checksum_sha256 covers labels.f64 followed by features.f64.
inline constexpr int dataset_format_version = 1;

inline constexpr const char* manifest_file = "manifest.json";
inline constexpr const char* labels_file = "labels.f64";
inline constexpr const char* features_file = "features.f64";
inline constexpr const char* rejects_file = "rejects.json";

struct Manifest {
	int format_version = dataset_format_version;
	std::size_t n_sites = 0;
	std::size_t n_samples = 0;
	std::size_t n_steps = 0;
	double dt_fs = 0.0;
	std::uint64_t seed = 0;
	Range energy_range{};
	Range coupling_range{};
	double lambda_cm1 = 0.0;
	double gamma_cm1 = 0.0;
	double temperature_K = 0.0;
	int depth = 0;
	Integrator integrator = Integrator::expm;
	CoherenceChannel coherence = CoherenceChannel::real;
	std::size_t initial_site = 0; // 0-based in memory, 1-based in the JSON
	std::string checksum_sha256;

	std::size_t n_labels() const noexcept { return 2 * (n_sites - 1); }
	std::size_t n_features() const noexcept { return feature_count(n_sites); }
	double horizon_fs() const noexcept { return dt_fs * static_cast<double>(n_steps); }

	SamplingSpec sampling() const;
	BathSpec bath() const;
	HEOMConfig config() const;

	std::string to_json() const;
	static Manifest from_json(const std::string& text);
};

struct RejectedSample {
	std::size_t sample_id = 0;
	std::uint64_t sub_seed = 0;
	std::size_t step = 0;
	std::string reason;
};

struct GenerationOptions {
	std::size_t workers = 1;
	CoherenceChannel coherence = CoherenceChannel::real;
	// Called after each finished sample with (done, total); serialised, may come from any worker.
	std::function<void(std::size_t, std::size_t)> progress;
};

struct GenerationReport {
	Manifest manifest;
	std::vector<RejectedSample> rejects;
};

/// Samples, simulates and writes spec.n_samples records into `out` (created if needed).
/// The bath must be identical on every site. Output bytes depend only on the
/// arguments, not on the worker count.
GenerationReport generate_dataset(const SamplingSpec& spec, const BathSpec& bath, const HEOMConfig& config,
                                  const std::filesystem::path& out, const GenerationOptions& options = {});

struct DatasetRecord {
	std::size_t sample_id = 0;
	std::vector<double> labels;
	Trajectory trajectory;
};

struct ReadOptions {
	// Keep only the first window_steps time steps of every trajectory.
	std::optional<std::size_t> window_steps;
	bool verify_checksum = true;
};

/// Steps covering the first window_fs femtoseconds. Throws invalid_input if the
/// window is non-positive or longer than the stored horizon.
std::size_t window_steps_for(const Manifest& manifest, double window_fs);

Manifest read_manifest(const std::filesystem::path& dir);

/// Streaming reader; yields non-rejected records in sample_id order.
///
/// Construction validates the layout: missing or unparseable manifest and
/// unknown versions raise unsupported_format; wrong file sizes and checksum
/// mismatches raise corruption_error.
class DatasetReader {
public:
	explicit DatasetReader(const std::filesystem::path& dir, ReadOptions options = {});

	const Manifest& manifest() const noexcept { return manifest_; }
	const std::vector<RejectedSample>& rejects() const noexcept { return rejects_; }
	std::size_t window_steps() const noexcept { return window_steps_; }

	std::optional<DatasetRecord> next();

private:
	std::filesystem::path dir_;
	Manifest manifest_;
	std::vector<RejectedSample> rejects_;
	std::vector<bool> rejected_;
	std::size_t window_steps_ = 0;
	std::size_t cursor_ = 0;
	std::ifstream labels_;
	std::ifstream features_;
};

inline DatasetReader read_dataset(const std::filesystem::path& dir, ReadOptions options = {})
{
	return DatasetReader(dir, options);
}

// Checksum over labels.f64 + features.f64 as stored in the manifest.
std::string dataset_checksum(const std::filesystem::path& dir);

// Little-endian float64 encoding independent of the host byte order.
void encode_f64(const double* values, std::size_t count, char* out);
void decode_f64(const char* in, std::size_t count, double* values);

} // namespace heom

#endif // heom_dataset_hpp
