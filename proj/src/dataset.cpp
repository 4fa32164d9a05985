#include "heom/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "heom/checksum.hpp"
#include "heom/errors.hpp"
#include "heom/units.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace heom {

void encode_f64(const double* values, std::size_t count, char* out)
{
	for (std::size_t k = 0; k < count; ++k) {
		auto bits = std::bit_cast<std::uint64_t>(values[k]);
		for (int b = 0; b < 8; ++b) {
			out[8 * k + b] = static_cast<char>(bits & 0xff);
			bits >>= 8;
		}
	}
}

void decode_f64(const char* in, std::size_t count, double* values)
{
	for (std::size_t k = 0; k < count; ++k) {
		std::uint64_t bits = 0;
		for (int b = 7; b >= 0; --b)
			bits = (bits << 8) | static_cast<unsigned char>(in[8 * k + b]);
		values[k] = std::bit_cast<double>(bits);
	}
}

// ---------------------------------------------------------------------------
// manifest

SamplingSpec Manifest::sampling() const
{
	return SamplingSpec{n_sites, energy_range, coupling_range, n_samples, seed};
}

BathSpec Manifest::bath() const
{
	return BathSpec::uniform(n_sites, lambda_cm1, gamma_cm1, temperature_K);
}

HEOMConfig Manifest::config() const
{
	HEOMConfig c;
	c.truncation_depth = depth;
	c.dt = units::fs_to_ps(dt_fs);
	c.n_steps = n_steps;
	c.integrator = integrator;
	c.initial_site = initial_site;
	return c;
}

std::string Manifest::to_json() const
{
	ordered_json j;
	j["format_version"] = format_version;
	j["n_sites"] = n_sites;
	j["n_samples"] = n_samples;
	j["n_steps"] = n_steps;
	j["dt_fs"] = dt_fs;
	j["seed"] = seed;
	j["energy_range"] = {energy_range.lo, energy_range.hi};
	j["coupling_range"] = {coupling_range.lo, coupling_range.hi};
	j["lambda_cm1"] = lambda_cm1;
	j["gamma_cm1"] = gamma_cm1;
	j["temperature_K"] = temperature_K;
	j["depth"] = depth;
	j["integrator"] = std::string(to_string(integrator));
	j["coherence"] = std::string(to_string(coherence));
	j["initial_site"] = initial_site + 1;
	j["energy_offset_cm1"] = units::site_energy_offset_cm1;
	j["byte_order"] = "little";
	j["n_labels"] = n_labels();
	j["n_features"] = n_features();

	std::vector<std::string> label_names;
	for (std::size_t s = 2; s <= n_sites; ++s)
		label_names.push_back("eps_" + std::to_string(s));
	for (std::size_t s = 1; s < n_sites; ++s)
		label_names.push_back("J_" + std::to_string(s) + std::to_string(s + 1));
	j["label_names"] = label_names;
	Trajectory names_only;
	names_only.n_sites = n_sites;
	j["feature_names"] = names_only.column_names();

	j["checksum_sha256"] = checksum_sha256;
	return j.dump(2) + "\n";
}

Manifest Manifest::from_json(const std::string& text)
{
	ordered_json j;
	try {
		j = ordered_json::parse(text);
	} catch (const nlohmann::json::exception& e) {
		throw unsupported_format(std::string("manifest is not valid JSON: ") + e.what());
	}
	if (!j.is_object() || !j.contains("format_version"))
		throw unsupported_format("manifest has no format_version");
	const auto version = j["format_version"];
	if (!version.is_number_integer() || version.get<int>() != dataset_format_version)
		throw unsupported_format("unsupported dataset format version " + version.dump());

	try {
		Manifest m;
		m.format_version = version.get<int>();
		m.n_sites = j.at("n_sites").get<std::size_t>();
		m.n_samples = j.at("n_samples").get<std::size_t>();
		m.n_steps = j.at("n_steps").get<std::size_t>();
		m.dt_fs = j.at("dt_fs").get<double>();
		m.seed = j.at("seed").get<std::uint64_t>();
		m.energy_range = {j.at("energy_range").at(0).get<double>(), j.at("energy_range").at(1).get<double>()};
		m.coupling_range = {j.at("coupling_range").at(0).get<double>(), j.at("coupling_range").at(1).get<double>()};
		m.lambda_cm1 = j.at("lambda_cm1").get<double>();
		m.gamma_cm1 = j.at("gamma_cm1").get<double>();
		m.temperature_K = j.at("temperature_K").get<double>();
		m.depth = j.at("depth").get<int>();
		m.integrator = parse_integrator(j.at("integrator").get<std::string>());
		m.coherence = j.contains("coherence") ? parse_coherence_channel(j["coherence"].get<std::string>()) : CoherenceChannel::real;
		const auto site = j.contains("initial_site") ? j["initial_site"].get<std::size_t>() : 1;
		m.initial_site = site == 0 ? 0 : site - 1;
		m.checksum_sha256 = j.at("checksum_sha256").get<std::string>();
		if (m.n_sites < 2 || m.n_steps == 0)
			throw unsupported_format("manifest describes an empty dataset layout");
		return m;
	} catch (const nlohmann::json::exception& e) {
		throw unsupported_format(std::string("manifest is missing or mistypes a field: ") + e.what());
	} catch (const invalid_input& e) {
		throw unsupported_format(std::string("manifest has an invalid value: ") + e.what());
	}
}

Manifest read_manifest(const fs::path& dir)
{
	const auto path = dir / manifest_file;
	if (!fs::is_regular_file(path))
		throw unsupported_format("no " + std::string(manifest_file) + " in " + dir.string());
	std::ifstream in(path, std::ios::binary);
	std::stringstream buffer;
	buffer << in.rdbuf();
	return Manifest::from_json(buffer.str());
}

std::string dataset_checksum(const fs::path& dir)
{
	return sha256_files({dir / labels_file, dir / features_file});
}

std::size_t window_steps_for(const Manifest& manifest, double window_fs)
{
	if (!(window_fs > 0.0) || !std::isfinite(window_fs))
		throw invalid_input("window must be a positive number of femtoseconds");
	const double steps = window_fs / manifest.dt_fs;
	const double rounded = std::round(steps);
	const double whole = std::abs(steps - rounded) <= 1e-9 * std::max(1.0, rounded) ? rounded : std::floor(steps);
	if (whole > static_cast<double>(manifest.n_steps))
		throw invalid_input("window of " + std::to_string(window_fs) + " fs exceeds the stored horizon of "
		                    + std::to_string(manifest.horizon_fs()) + " fs");
	if (whole < 1.0)
		throw invalid_input("window is shorter than one time step");
	return static_cast<std::size_t>(whole);
}

// ---------------------------------------------------------------------------
// writing

namespace {

std::string rejects_to_json(const std::vector<RejectedSample>& rejects)
{
	ordered_json arr = ordered_json::array();
	for (const auto& r : rejects)
		arr.push_back({{"sample_id", r.sample_id}, {"sub_seed", r.sub_seed}, {"step", r.step}, {"reason", r.reason}});
	return arr.dump(2) + "\n";
}

std::vector<RejectedSample> rejects_from_json(const std::string& text)
{
	std::vector<RejectedSample> out;
	try {
		const auto arr = ordered_json::parse(text);
		for (const auto& r : arr)
			out.push_back({r.at("sample_id").get<std::size_t>(), r.at("sub_seed").get<std::uint64_t>(),
			               r.at("step").get<std::size_t>(), r.at("reason").get<std::string>()});
	} catch (const nlohmann::json::exception& e) {
		throw corruption_error(std::string("rejects.json is malformed: ") + e.what());
	}
	return out;
}

void write_text(const fs::path& path, const std::string& text)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	out << text;
	if (!out)
		throw std::runtime_error("cannot write " + path.string());
}

// Random-access binary file with preallocated size; writes are serialised by the caller.
class BlockFile {
public:
	BlockFile(const fs::path& path, std::uintmax_t size) : path_(path)
	{
		{
			std::ofstream create(path, std::ios::binary | std::ios::trunc);
			if (!create)
				throw std::runtime_error("cannot create " + path.string());
		}
		fs::resize_file(path, size);
		stream_.open(path, std::ios::binary | std::ios::in | std::ios::out);
		if (!stream_)
			throw std::runtime_error("cannot open " + path.string());
	}

	void write_at(std::uintmax_t offset, const std::vector<char>& bytes)
	{
		stream_.seekp(static_cast<std::streamoff>(offset));
		stream_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
		if (!stream_)
			throw std::runtime_error("write failed on " + path_.string());
	}

	void close()
	{
		stream_.close();
		if (stream_.fail())
			throw std::runtime_error("cannot close " + path_.string());
	}

private:
	fs::path path_;
	std::fstream stream_;
};

} // namespace

GenerationReport generate_dataset(const SamplingSpec& spec, const BathSpec& bath, const HEOMConfig& config,
                                  const fs::path& out, const GenerationOptions& options)
{
	spec.validate();
	config.validate();
	if (bath.n_sites() != spec.n_sites)
		throw invalid_input("bath has " + std::to_string(bath.n_sites()) + " sites but sampling asks for " + std::to_string(spec.n_sites));
	if (!bath.is_uniform())
		throw invalid_input("datasets require an identical bath on every site");
	if (config.initial_site >= spec.n_sites)
		throw invalid_input("initial site out of range");

	Manifest m;
	m.n_sites = spec.n_sites;
	m.n_samples = spec.n_samples;
	m.n_steps = config.n_steps;
	m.dt_fs = units::ps_to_fs(config.dt);
	m.seed = spec.seed;
	m.energy_range = spec.energy_range;
	m.coupling_range = spec.coupling_range;
	m.lambda_cm1 = bath.lambdas().front();
	m.gamma_cm1 = bath.gammas().front();
	m.temperature_K = bath.temperature();
	m.depth = config.truncation_depth;
	m.integrator = config.integrator;
	m.coherence = options.coherence;
	m.initial_site = config.initial_site;

	fs::create_directories(out);
	const std::size_t label_bytes = m.n_labels() * 8;
	const std::size_t feature_bytes = m.n_steps * m.n_features() * 8;
	BlockFile labels(out / labels_file, static_cast<std::uintmax_t>(label_bytes) * m.n_samples);
	BlockFile features(out / features_file, static_cast<std::uintmax_t>(feature_bytes) * m.n_samples);

	std::atomic<std::size_t> next{0};
	std::atomic<bool> abort{false};
	std::mutex io;
	std::size_t done = 0;
	std::vector<std::optional<RejectedSample>> rejected(m.n_samples);
	std::exception_ptr failure;

	auto worker = [&]() {
		std::vector<char> label_buffer(label_bytes);
		std::vector<char> feature_buffer(feature_bytes);
		std::vector<double> nan_row(m.n_steps * m.n_features(), std::numeric_limits<double>::quiet_NaN());
		try {
			for (std::size_t i = next++; i < m.n_samples && !abort; i = next++) {
				const auto h = sample_hamiltonian(spec, i);
				const auto label_values = h.labels();
				encode_f64(label_values.data(), label_values.size(), label_buffer.data());

				std::optional<RejectedSample> reject;
				try {
					const auto run = propagate(h, bath, config);
					const auto trajectory = extract_features(run.rho, run.times, options.coherence);
					encode_f64(trajectory.features.data(), static_cast<std::size_t>(trajectory.features.size()), feature_buffer.data());
				} catch (const divergence_error& e) {
					reject = RejectedSample{i, sample_seed(spec.seed, i), e.step(), e.what()};
					encode_f64(nan_row.data(), nan_row.size(), feature_buffer.data());
				}

				std::lock_guard lock(io);
				labels.write_at(static_cast<std::uintmax_t>(i) * label_bytes, label_buffer);
				features.write_at(static_cast<std::uintmax_t>(i) * feature_bytes, feature_buffer);
				rejected[i] = std::move(reject);
				++done;
				if (options.progress)
					options.progress(done, m.n_samples);
			}
		} catch (...) {
			std::lock_guard lock(io);
			if (!failure)
				failure = std::current_exception();
			abort = true;
		}
	};

	const std::size_t n_workers = std::clamp<std::size_t>(options.workers, 1, m.n_samples);
	if (n_workers == 1) {
		worker();
	} else {
		std::vector<std::jthread> pool;
		for (std::size_t w = 0; w < n_workers; ++w)
			pool.emplace_back(worker);
	}
	if (failure)
		std::rethrow_exception(failure);

	labels.close();
	features.close();

	GenerationReport report;
	for (auto& r : rejected)
		if (r)
			report.rejects.push_back(std::move(*r));
	write_text(out / rejects_file, rejects_to_json(report.rejects));

	m.checksum_sha256 = dataset_checksum(out);
	write_text(out / manifest_file, m.to_json());
	report.manifest = m;
	return report;
}

// ---------------------------------------------------------------------------
// reading

namespace {

void check_size(const fs::path& path, std::uintmax_t expected)
{
	if (!fs::is_regular_file(path))
		throw corruption_error(path.filename().string() + " is missing");
	const auto actual = fs::file_size(path);
	if (actual < expected)
		throw corruption_error(path.filename().string() + " is truncated at byte offset " + std::to_string(actual) + " (expected "
		                       + std::to_string(expected) + " bytes)");
	if (actual > expected)
		throw corruption_error(path.filename().string() + " has trailing data from byte offset " + std::to_string(expected));
}

} // namespace

DatasetReader::DatasetReader(const fs::path& dir, ReadOptions options) : dir_(dir), manifest_(read_manifest(dir))
{
	const auto& m = manifest_;
	check_size(dir / labels_file, static_cast<std::uintmax_t>(m.n_samples) * m.n_labels() * 8);
	check_size(dir / features_file, static_cast<std::uintmax_t>(m.n_samples) * m.n_steps * m.n_features() * 8);

	if (options.verify_checksum) {
		const auto actual = dataset_checksum(dir);
		if (actual != m.checksum_sha256)
			throw corruption_error("checksum mismatch: manifest says " + m.checksum_sha256 + ", data hashes to " + actual);
	}

	const auto rejects_path = dir / rejects_file;
	if (!fs::is_regular_file(rejects_path))
		throw corruption_error(std::string(rejects_file) + " is missing");
	{
		std::ifstream in(rejects_path, std::ios::binary);
		std::stringstream buffer;
		buffer << in.rdbuf();
		rejects_ = rejects_from_json(buffer.str());
	}
	rejected_.assign(m.n_samples, false);
	for (const auto& r : rejects_) {
		if (r.sample_id >= m.n_samples)
			throw corruption_error("rejects.json names sample " + std::to_string(r.sample_id) + " beyond the dataset");
		rejected_[r.sample_id] = true;
	}

	window_steps_ = options.window_steps.value_or(m.n_steps);
	if (window_steps_ == 0 || window_steps_ > m.n_steps)
		throw invalid_input("window of " + std::to_string(window_steps_) + " steps exceeds the stored " + std::to_string(m.n_steps));

	labels_.open(dir / labels_file, std::ios::binary);
	features_.open(dir / features_file, std::ios::binary);
	if (!labels_ || !features_)
		throw corruption_error("cannot open dataset files in " + dir.string());
}

std::optional<DatasetRecord> DatasetReader::next()
{
	const auto& m = manifest_;
	while (cursor_ < m.n_samples && rejected_[cursor_])
		++cursor_;
	if (cursor_ >= m.n_samples)
		return std::nullopt;

	const std::size_t id = cursor_++;
	const std::size_t n_labels = m.n_labels();
	const std::size_t n_features = m.n_features();

	std::vector<char> bytes(n_labels * 8);
	const auto label_offset = static_cast<std::uintmax_t>(id) * n_labels * 8;
	labels_.seekg(static_cast<std::streamoff>(label_offset));
	labels_.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
	if (labels_.gcount() != static_cast<std::streamsize>(bytes.size()))
		throw corruption_error("labels.f64 ends early at byte offset " + std::to_string(label_offset + labels_.gcount()));

	DatasetRecord record;
	record.sample_id = id;
	record.labels.resize(n_labels);
	decode_f64(bytes.data(), n_labels, record.labels.data());

	const std::size_t values = window_steps_ * n_features;
	bytes.resize(values * 8);
	const auto feature_offset = static_cast<std::uintmax_t>(id) * m.n_steps * n_features * 8;
	features_.seekg(static_cast<std::streamoff>(feature_offset));
	features_.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
	if (features_.gcount() != static_cast<std::streamsize>(bytes.size()))
		throw corruption_error("features.f64 ends early at byte offset " + std::to_string(feature_offset + features_.gcount()));

	auto& t = record.trajectory;
	t.n_sites = m.n_sites;
	t.features.resize(static_cast<Eigen::Index>(window_steps_), static_cast<Eigen::Index>(n_features));
	decode_f64(bytes.data(), values, t.features.data());
	t.times.resize(window_steps_);
	const double dt_ps = units::fs_to_ps(m.dt_fs);
	for (std::size_t k = 0; k < window_steps_; ++k)
		t.times[k] = static_cast<double>(k) * dt_ps;
	return record;
}

} // namespace heom
