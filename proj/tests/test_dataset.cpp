#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <numeric>

#include "json.hpp"
#include "support.hpp"

#include "heom/dataset.hpp"
#include "heom/errors.hpp"
#include "heom/features.hpp"
#include "heom/sampling.hpp"

using namespace heom;
namespace fs = std::filesystem;

namespace {

const BathSpec bath2 = BathSpec::uniform(2, 35.0, 106.1767, 300.0);

// Kolmogorov-Smirnov distance between a sample and Uniform(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi)
{
	std::sort(xs.begin(), xs.end());
	const double n = static_cast<double>(xs.size());
	double d = 0.0;
	for (std::size_t i = 0; i < xs.size(); ++i) {
		const double f = (xs[i] - lo) / (hi - lo);
		d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
	}
	return d;
}

void flip_byte(const fs::path& file, std::uintmax_t offset)
{
	std::fstream f(file, std::ios::binary | std::ios::in | std::ios::out);
	f.seekg(static_cast<std::streamoff>(offset));
	char c = 0;
	f.read(&c, 1);
	c = static_cast<char>(c ^ 0x5a);
	f.seekp(static_cast<std::streamoff>(offset));
	f.write(&c, 1);
}

SamplingSpec small_spec(std::size_t n_sites, std::size_t samples, std::uint64_t seed)
{
	SamplingSpec spec;
	spec.n_sites = n_sites;
	spec.n_samples = samples;
	spec.seed = seed;
	return spec;
}

} // namespace

TEST_CASE("sampling is a pure function of (seed, index)")
{
	const auto spec = small_spec(4, 10, 42);
	const auto a = sample_hamiltonian(spec, 7);
	const auto b = sample_hamiltonian(spec, 7);
	CHECK(a.labels() == b.labels());
	CHECK(a.labels() != sample_hamiltonian(spec, 8).labels());
	CHECK(a.labels() != sample_hamiltonian(small_spec(4, 10, 43), 7).labels());
	CHECK(a.labels().size() == 6);
	CHECK(a.energies()[0] == 0.0);
}

TEST_CASE("uniform mapping")
{
	const Range r{-100.0, 100.0};
	CHECK(uniform_in(0, r) == -100.0);
	CHECK(uniform_in(~std::uint64_t{0}, r) < 100.0);
	CHECK(uniform_in(std::uint64_t{1} << 63, r) == 0.0);
}

TEST_CASE("sampled values follow the configured ranges")
{
	const auto spec = small_spec(2, 100000, 2024);
	double lo = 1e9, hi = -1e9, sum = 0.0;
	for (std::size_t i = 0; i < 100000; ++i) {
		const auto h = sample_hamiltonian(spec, i);
		const double eps = h.energies()[1];
		lo = std::min(lo, eps);
		hi = std::max(hi, eps);
		sum += eps;
		CHECK(std::abs(h.couplings()[0]) <= 100.0);
	}
	CHECK(lo >= -100.0);
	CHECK(hi <= 100.0);
	CHECK(std::abs(sum / 100000.0) <= 2.0);
}

TEST_CASE("label histograms stay uniform after a train/validation/test split")
{
	const auto spec = small_spec(4, 25000, 99);
	std::vector<std::vector<double>> labels;
	for (std::size_t i = 0; i < spec.n_samples; ++i)
		labels.push_back(sample_hamiltonian(spec, i).labels());

	std::vector<std::size_t> order(spec.n_samples);
	std::iota(order.begin(), order.end(), 0);
	std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
	const std::size_t n_train = 17000, n_val = 4250;
	const std::vector<std::pair<std::size_t, std::size_t>> splits{{0, n_train}, {n_train, n_train + n_val}, {n_train + n_val, spec.n_samples}};

	for (const auto& [begin, end] : splits)
		for (std::size_t label = 0; label < 6; ++label) {
			std::vector<double> xs;
			for (std::size_t k = begin; k < end; ++k)
				xs.push_back(labels[order[k]][label]);
			CAPTURE(begin);
			CAPTURE(label);
			CHECK(ks_uniform(xs, -100.0, 100.0) < 0.05);
		}
}

TEST_CASE("sampling spec validation")
{
	auto spec = small_spec(2, 10, 1);
	spec.energy_range = {5.0, 5.0};
	CHECK_THROWS_AS(spec.validate(), invalid_input);
	spec = small_spec(1, 10, 1);
	CHECK_THROWS_AS(spec.validate(), invalid_input);
	spec = small_spec(2, 0, 1);
	CHECK_THROWS_AS(spec.validate(), invalid_input);
}

TEST_CASE("feature extraction")
{
	SUBCASE("stationary diagonal state")
	{
		std::vector<complex_matrix_t> series(4, site_population_state(2, 0));
		const auto t = extract_features(series, {0.0, 0.1, 0.2, 0.3});
		CHECK(t.n_features() == 3);
		for (Eigen::Index k = 0; k < 4; ++k) {
			CHECK(t.features(k, 0) == 1.0);
			CHECK(t.features(k, 1) == 0.0);
			CHECK(t.features(k, 2) == 0.0);
		}
		CHECK(t.column_names() == std::vector<std::string>{"p_1", "p_2", "c_1"});
	}
	SUBCASE("coherence channels")
	{
		complex_matrix_t rho(3, 3);
		rho << 0.5, complex_t(0.1, 0.2), 0.0, complex_t(0.1, -0.2), 0.3, complex_t(-0.05, 0.0), 0.0, complex_t(-0.05, 0.0), 0.2;
		const std::vector<complex_matrix_t> series{rho};
		const auto re = extract_features(series, {0.0});
		CHECK(re.features(0, 3) == 0.1);
		CHECK(re.features(0, 4) == -0.05);
		CHECK(extract_features(series, {0.0}, CoherenceChannel::imag).features(0, 3) == 0.2);
		CHECK(extract_features(series, {0.0}, CoherenceChannel::abs).features(0, 3) == doctest::Approx(std::sqrt(0.05)));
		CHECK(extract_features(series, {0.0}, CoherenceChannel::abs).features(0, 4) == 0.05);
		CHECK(parse_coherence_channel("abs") == CoherenceChannel::abs);
		CHECK_THROWS_AS(parse_coherence_channel("phase"), invalid_input);
	}
	SUBCASE("errors")
	{
		CHECK_THROWS_AS(extract_features({}, {}), invalid_input);
		CHECK_THROWS_AS(extract_features({site_population_state(2, 0)}, {0.0, 1.0}), invalid_input);
		CHECK_THROWS_AS(extract_features({site_population_state(2, 0), site_population_state(3, 0)}, {0.0, 1.0}), invalid_input);
	}
	SUBCASE("engine trajectories satisfy the row invariants")
	{
		const auto sys = sample_hamiltonian(small_spec(3, 1, 8), 0);
		const auto run = propagate(sys, BathSpec::uniform(3, 35.0, 106.1767, 300.0), HEOMConfig{});
		const auto t = extract_features(run.rho, run.times);
		CHECK(t.n_steps() == 5000);
		const auto check = check_trajectory(t);
		CHECK(check.rows == 5000);
		CHECK(check.ok());
	}
	SUBCASE("violations are counted")
	{
		Trajectory t;
		t.n_sites = 2;
		t.times = {0.0, 1.0, 2.0};
		t.features.resize(3, 3);
		t.features << 1.0, 0.0, 0.0, 0.7, 0.2, 0.1, 1.2, -0.2, 1.5;
		const auto check = check_trajectory(t);
		CHECK(check.bad_row_sums == 1);
		CHECK(check.bad_populations == 1);
		CHECK(check.bad_coherences == 1);
		CHECK_FALSE(check.ok());
	}
}

TEST_CASE("float64 encoding is little-endian and bit-exact")
{
	const double one = 1.0;
	char bytes[8];
	encode_f64(&one, 1, bytes);
	CHECK(static_cast<unsigned char>(bytes[7]) == 0x3f);
	CHECK(static_cast<unsigned char>(bytes[6]) == 0xf0);
	CHECK(bytes[0] == 0);

	std::mt19937_64 rng(1);
	std::vector<double> values(4096);
	for (auto& v : values)
		v = std::bit_cast<double>(rng());
	values[0] = -0.0;
	values[1] = std::numeric_limits<double>::denorm_min();
	values[2] = std::numeric_limits<double>::infinity();
	std::vector<char> buffer(values.size() * 8);
	encode_f64(values.data(), values.size(), buffer.data());
	std::vector<double> back(values.size());
	decode_f64(buffer.data(), values.size(), back.data());
	CHECK(std::memcmp(values.data(), back.data(), values.size() * 8) == 0);
}

TEST_CASE("dataset generation and reading")
{
	const auto spec = small_spec(2, 10, 42);
	const HEOMConfig config;
	const auto a = test::scratch_dir("gen_a");
	const auto b = test::scratch_dir("gen_b");

	GenerationOptions one_worker;
	GenerationOptions three_workers;
	three_workers.workers = 3;
	std::size_t progress_calls = 0;
	three_workers.progress = [&](std::size_t, std::size_t total) {
		++progress_calls;
		CHECK(total == 10);
	};
	const auto report = generate_dataset(spec, bath2, config, a, one_worker);
	generate_dataset(spec, bath2, config, b, three_workers);
	CHECK(progress_calls == 10);
	CHECK(report.rejects.empty());

	for (const char* file : {manifest_file, labels_file, features_file, rejects_file})
		CHECK(test::slurp(a / file) == test::slurp(b / file));
	CHECK(fs::file_size(a / labels_file) == 10 * 2 * 8);
	CHECK(fs::file_size(a / features_file) == 10 * 5000 * 3 * 8);

	SUBCASE("manifest schema")
	{
		const auto j = nlohmann::json::parse(test::slurp(a / manifest_file));
		for (const char* key : {"format_version", "n_sites", "n_samples", "n_steps", "dt_fs", "seed", "energy_range", "coupling_range",
		                        "lambda_cm1", "gamma_cm1", "temperature_K", "depth", "integrator", "checksum_sha256"})
			CHECK_MESSAGE(j.contains(key), key);
		CHECK(j["format_version"] == 1);
		CHECK(j["n_steps"] == 5000);
		CHECK(j["dt_fs"].get<double>() == doctest::Approx(0.2));
		CHECK(j["integrator"] == "expm");
		CHECK(j["checksum_sha256"] == dataset_checksum(a));
		CHECK(j["checksum_sha256"].get<std::string>().size() == 64);
	}

	SUBCASE("records reproduce direct simulation bit for bit")
	{
		auto reader = read_dataset(a);
		CHECK(reader.manifest().checksum_sha256 == report.manifest.checksum_sha256);
		std::size_t count = 0;
		while (auto record = reader.next()) {
			CHECK(record->sample_id == count);
			const auto h = sample_hamiltonian(spec, count);
			CHECK(record->labels == h.labels());
			const auto run = propagate(h, bath2, config);
			const auto direct = extract_features(run.rho, run.times);
			REQUIRE(record->trajectory.features.rows() == 5000);
			CHECK(std::memcmp(record->trajectory.features.data(), direct.features.data(), sizeof(double) * 5000 * 3) == 0);
			CHECK(check_trajectory(record->trajectory).ok());
			++count;
		}
		CHECK(count == 10);
	}

	SUBCASE("window limit")
	{
		const auto m = read_manifest(a);
		CHECK(window_steps_for(m, 400.0) == 2000);
		CHECK(window_steps_for(m, 1000.0) == 5000);
		CHECK_THROWS_AS(window_steps_for(m, 2000.0), invalid_input);
		CHECK_THROWS_AS(window_steps_for(m, 0.0), invalid_input);
		ReadOptions options;
		options.window_steps = 2000;
		auto reader = read_dataset(a, options);
		const auto record = reader.next();
		REQUIRE(record);
		CHECK(record->trajectory.n_steps() == 2000);
		CHECK(record->trajectory.times.back() == doctest::Approx(0.3998));
		options.window_steps = 5001;
		CHECK_THROWS_AS(read_dataset(a, options), invalid_input);
	}

	SUBCASE("corrupted byte")
	{
		flip_byte(a / features_file, 12345);
		CHECK_THROWS_AS(read_dataset(a), corruption_error);
		ReadOptions lax;
		lax.verify_checksum = false;
		CHECK_NOTHROW(read_dataset(a, lax));
	}

	SUBCASE("truncated features")
	{
		fs::resize_file(a / features_file, 1000);
		try {
			read_dataset(a);
			FAIL("expected corruption error");
		} catch (const corruption_error& e) {
			CHECK(std::string(e.what()).find("byte offset 1000") != std::string::npos);
		}
	}

	SUBCASE("unknown version")
	{
		auto j = nlohmann::json::parse(test::slurp(a / manifest_file));
		j["format_version"] = 99;
		std::ofstream(a / manifest_file) << j.dump();
		CHECK_THROWS_AS(read_dataset(a), unsupported_format);
	}

	SUBCASE("missing manifest")
	{
		const auto empty = test::scratch_dir("empty");
		CHECK_THROWS_AS(read_dataset(empty), unsupported_format);
	}
}

TEST_CASE("divergent samples are rejected and logged")
{
	const auto dir = test::scratch_dir("rejects");
	auto config = HEOMConfig::from_horizon(40.0, 400, 3, Integrator::rk4);
	const auto spec = small_spec(2, 3, 5);
	const auto report = generate_dataset(spec, bath2, config, dir);
	REQUIRE(report.rejects.size() == 3);
	CHECK(report.rejects[1].sample_id == 1);
	CHECK(report.rejects[1].sub_seed == sample_seed(5, 1));
	CHECK(report.rejects[1].step > 0);

	auto reader = read_dataset(dir);
	CHECK(reader.rejects().size() == 3);
	CHECK_FALSE(reader.next().has_value());
}

TEST_CASE("generation argument checks")
{
	const auto dir = test::scratch_dir("bad");
	CHECK_THROWS_AS(generate_dataset(small_spec(3, 2, 1), bath2, HEOMConfig{}, dir), invalid_input);
	CHECK_THROWS_AS(generate_dataset(small_spec(2, 2, 1), BathSpec({35.0, 30.0}, {100.0, 100.0}, 300.0), HEOMConfig{}, dir),
	                invalid_input);
}
