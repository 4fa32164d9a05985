#include "heom/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <thread>

#include "CLI11.hpp"

#include "heom/csv.hpp"
#include "heom/dataset.hpp"
#include "heom/engine.hpp"
#include "heom/errors.hpp"
#include "heom/features.hpp"
#include "heom/sampling.hpp"

namespace fs = std::filesystem;

namespace heom::cli {

namespace {

// Flags shared by simulate and gen-dataset.
struct PhysicsFlags {
	double lambda = 35.0;
	double gamma = 106.1767;
	double temperature = 300.0;
	int depth = 3;
	double time_ps = 1.0;
	std::size_t steps = 5000;
	std::string integrator = "expm";
	std::size_t initial_site = 1;
	std::string coherence = "real";

	void add_to(CLI::App& app)
	{
		app.add_option("--lambda", lambda, "Reorganization energy [cm^-1]")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--gamma", gamma, "Drude cutoff [cm^-1]")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--temp", temperature, "Temperature [K]")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--depth", depth, "Hierarchy truncation depth")->capture_default_str()->check(CLI::Range(1, 64));
		app.add_option("--time-ps", time_ps, "Propagation horizon [ps]")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--steps", steps, "Number of time steps")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--integrator", integrator, "Propagation method")->capture_default_str()->check(CLI::IsMember({"rk4", "expm"}));
		app.add_option("--initial-site", initial_site, "Initially excited site (1-based)")->capture_default_str()->check(CLI::PositiveNumber);
		app.add_option("--coherence", coherence, "Coherence feature: real, imag or abs part of rho_{j,j+1}")
			->capture_default_str()
			->check(CLI::IsMember({"real", "imag", "abs"}));
	}

	HEOMConfig config(std::size_t n_sites) const
	{
		auto c = HEOMConfig::from_horizon(time_ps, steps, depth, parse_integrator(integrator));
		if (initial_site > n_sites)
			throw invalid_input("--initial-site " + std::to_string(initial_site) + " exceeds --levels " + std::to_string(n_sites));
		c.initial_site = initial_site - 1;
		return c;
	}
};

struct SimulateFlags {
	std::size_t levels = 0;
	std::vector<double> energies;
	std::vector<double> couplings;
	std::string out;
	PhysicsFlags physics;
};

struct GenerateFlags {
	std::size_t levels = 0;
	std::size_t samples = 25000;
	std::uint64_t seed = 0;
	std::string out;
	std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
	PhysicsFlags physics;
};

struct InspectFlags {
	std::string path;
};

struct ExportFlags {
	std::string path;
	std::optional<double> window_fs;
	std::string out;
	std::optional<std::size_t> sample;
	bool per_sample = false;
};

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback)
{
	if (path.empty() || path == "-")
		return fallback;
	file.open(path, std::ios::binary | std::ios::trunc);
	if (!file)
		throw std::runtime_error("cannot open " + path + " for writing");
	return file;
}

int simulate(const SimulateFlags& f, std::ostream& out, std::ostream& err)
{
	if (f.energies.size() != f.levels)
		throw invalid_input("--energies needs " + std::to_string(f.levels) + " values, got " + std::to_string(f.energies.size()));
	if (f.couplings.size() + 1 != f.levels)
		throw invalid_input("--couplings needs " + std::to_string(f.levels - 1) + " values, got " + std::to_string(f.couplings.size()));

	const SystemHamiltonian h(f.energies, f.couplings);
	const auto bath = BathSpec::uniform(f.levels, f.physics.lambda, f.physics.gamma, f.physics.temperature);
	const auto config = f.physics.config(f.levels);

	const auto run = propagate(h, bath, config);
	for (const auto& w : run.warnings)
		err << "warning: " << w << '\n';
	const auto trajectory = extract_features(run.rho, run.times, parse_coherence_channel(f.physics.coherence));

	std::ofstream file;
	auto& sink = open_output(f.out, file, out);
	csv::write_trajectory(sink, trajectory);
	sink.flush();
	if (!sink)
		throw std::runtime_error("failed writing trajectory");
	return success;
}

int generate(const GenerateFlags& f, std::ostream& out, std::ostream& err)
{
	SamplingSpec spec;
	spec.n_sites = f.levels;
	spec.n_samples = f.samples;
	spec.seed = f.seed;
	const auto bath = BathSpec::uniform(f.levels, f.physics.lambda, f.physics.gamma, f.physics.temperature);
	const auto config = f.physics.config(f.levels);

	GenerationOptions options;
	options.workers = f.workers;
	options.coherence = parse_coherence_channel(f.physics.coherence);
	const std::size_t stride = std::max<std::size_t>(1, f.samples / 20);
	options.progress = [&err, stride](std::size_t done, std::size_t total) {
		if (done % stride == 0 || done == total)
			err << "generated " << done << '/' << total << '\n';
	};

	const auto report = generate_dataset(spec, bath, config, f.out, options);
	out << "samples " << report.manifest.n_samples << '\n';
	out << "rejected " << report.rejects.size() << '\n';
	out << "checksum_sha256 " << report.manifest.checksum_sha256 << '\n';
	return success;
}

struct LabelStats {
	double min = std::numeric_limits<double>::infinity();
	double max = -std::numeric_limits<double>::infinity();
	double sum = 0.0;
};

int inspect(const InspectFlags& f, std::ostream& out)
{
	DatasetReader reader(f.path);
	const auto& m = reader.manifest();

	out << "dataset " << f.path << '\n';
	out << "format_version " << m.format_version << '\n';
	out << "n_sites " << m.n_sites << '\n';
	out << "n_samples " << m.n_samples << '\n';
	out << "n_steps " << m.n_steps << '\n';
	out << "dt_fs " << csv::format(m.dt_fs) << '\n';
	out << "seed " << m.seed << '\n';
	out << "energy_range [" << csv::format(m.energy_range.lo) << ", " << csv::format(m.energy_range.hi) << "]\n";
	out << "coupling_range [" << csv::format(m.coupling_range.lo) << ", " << csv::format(m.coupling_range.hi) << "]\n";
	out << "lambda_cm1 " << csv::format(m.lambda_cm1) << '\n';
	out << "gamma_cm1 " << csv::format(m.gamma_cm1) << '\n';
	out << "temperature_K " << csv::format(m.temperature_K) << '\n';
	out << "depth " << m.depth << '\n';
	out << "integrator " << to_string(m.integrator) << '\n';
	out << "coherence " << to_string(m.coherence) << '\n';
	out << "checksum_sha256 " << m.checksum_sha256 << " (verified)\n";
	out << "rejected " << reader.rejects().size() << '\n';

	std::vector<LabelStats> stats(m.n_labels());
	std::size_t records = 0, passed = 0, bad_rows = 0, bad_populations = 0, bad_coherences = 0, out_of_range = 0;
	const auto spec = m.sampling();
	while (auto record = reader.next()) {
		++records;
		for (std::size_t k = 0; k < stats.size(); ++k) {
			const double v = record->labels[k];
			stats[k].min = std::min(stats[k].min, v);
			stats[k].max = std::max(stats[k].max, v);
			stats[k].sum += v;
			const auto& range = k + 1 < m.n_sites ? spec.energy_range : spec.coupling_range;
			if (!range.contains(v))
				++out_of_range;
		}
		const auto check = check_trajectory(record->trajectory);
		bad_rows += check.bad_row_sums;
		bad_populations += check.bad_populations;
		bad_coherences += check.bad_coherences;
		if (check.ok())
			++passed;
	}

	out << "labels (name min max mean)\n";
	for (std::size_t k = 0; k < stats.size(); ++k) {
		const auto name = k + 1 < m.n_sites ? "eps_" + std::to_string(k + 2) : "J_" + std::to_string(k + 2 - m.n_sites) + std::to_string(k + 3 - m.n_sites);
		const double mean = records ? stats[k].sum / static_cast<double>(records) : 0.0;
		out << "  " << name << ' ' << csv::format(stats[k].min) << ' ' << csv::format(stats[k].max) << ' ' << csv::format(mean) << '\n';
	}
	out << "labels_out_of_range " << out_of_range << '\n';
	out << "trajectories_checked " << records << '\n';
	out << "trajectories_passed " << passed << '\n';
	out << "trajectories_failed " << records - passed << '\n';
	out << "bad_row_sums " << bad_rows << '\n';
	out << "bad_populations " << bad_populations << '\n';
	out << "bad_coherences " << bad_coherences << '\n';
	return (passed == records && out_of_range == 0) ? success : runtime_failure;
}

int export_csv(const ExportFlags& f, std::ostream& out, std::ostream& err)
{
	const auto manifest = read_manifest(f.path);
	ReadOptions options;
	options.window_steps = window_steps_for(manifest, f.window_fs.value_or(manifest.horizon_fs()));
	DatasetReader reader(f.path, options);
	const auto& m = reader.manifest();

	if (f.sample && *f.sample >= m.n_samples)
		throw invalid_input("--sample " + std::to_string(*f.sample) + " out of range for " + std::to_string(m.n_samples) + " samples");

	if (f.per_sample) {
		if (f.out.empty() || f.out == "-")
			throw invalid_input("--per-sample needs --out to name a directory");
		fs::create_directories(f.out);
		std::size_t written = 0;
		while (auto record = reader.next()) {
			std::ofstream file(fs::path(f.out) / ("sample_" + std::to_string(record->sample_id) + ".csv"), std::ios::binary | std::ios::trunc);
			csv::write_trajectory(file, record->trajectory);
			if (!file)
				throw std::runtime_error("failed writing per-sample CSV");
			++written;
		}
		err << "wrote " << written << " trajectories of " << reader.window_steps() << " steps\n";
		return success;
	}

	std::ofstream file;
	auto& sink = open_output(f.out, file, out);

	if (f.sample) {
		while (auto record = reader.next()) {
			if (record->sample_id == *f.sample) {
				csv::write_trajectory(sink, record->trajectory);
				return success;
			}
			if (record->sample_id > *f.sample)
				break;
		}
		throw invalid_input("sample " + std::to_string(*f.sample) + " was rejected during generation");
	}

	std::vector<std::string> header{"sample_id", "time_ps"};
	for (std::size_t s = 2; s <= m.n_sites; ++s)
		header.push_back("eps_" + std::to_string(s));
	for (std::size_t s = 1; s < m.n_sites; ++s)
		header.push_back("J_" + std::to_string(s) + std::to_string(s + 1));
	Trajectory names_only;
	names_only.n_sites = m.n_sites;
	for (auto& name : names_only.column_names())
		header.push_back(std::move(name));
	csv::write_row(sink, header);

	std::vector<std::string> row;
	while (auto record = reader.next()) {
		std::vector<std::string> labels;
		for (double v : record->labels)
			labels.push_back(csv::format(v));
		const auto& t = record->trajectory;
		for (std::size_t k = 0; k < t.n_steps(); ++k) {
			row.assign({std::to_string(record->sample_id), csv::format(t.times[k])});
			row.insert(row.end(), labels.begin(), labels.end());
			const auto features = t.features.row(static_cast<Eigen::Index>(k));
			for (Eigen::Index j = 0; j < features.size(); ++j)
				row.push_back(csv::format(features(j)));
			csv::write_row(sink, row);
		}
	}
	sink.flush();
	if (!sink)
		throw std::runtime_error("failed writing export");
	return success;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
	CLI::App app{"HEOM excitation-energy-transfer simulator and dataset generator", "heomctl"};
	app.require_subcommand(1);

	SimulateFlags sim;
	auto* simulate_cmd = app.add_subcommand("simulate", "Propagate one linear-chain system and write its features as CSV");
	simulate_cmd->add_option("--levels", sim.levels, "Number of sites")->required()->check(CLI::Range(2, 64));
	simulate_cmd->add_option("--energies", sim.energies, "Site energies relative to site 1, comma separated [cm^-1]")
		->required()
		->delimiter(',');
	simulate_cmd->add_option("--couplings", sim.couplings, "Nearest-neighbour couplings, comma separated [cm^-1]")
		->required()
		->delimiter(',');
	simulate_cmd->add_option("--out", sim.out, "Output CSV (stdout if omitted)");
	sim.physics.add_to(*simulate_cmd);

	GenerateFlags gen;
	auto* generate_cmd = app.add_subcommand("gen-dataset", "Sample, simulate and store a dataset");
	generate_cmd->add_option("--levels", gen.levels, "Number of sites")->required()->check(CLI::Range(2, 64));
	generate_cmd->add_option("--samples", gen.samples, "Number of Hamiltonians")->capture_default_str()->check(CLI::PositiveNumber);
	generate_cmd->add_option("--seed", gen.seed, "Sampling seed")->capture_default_str();
	generate_cmd->add_option("--out", gen.out, "Output directory")->required();
	generate_cmd->add_option("--workers", gen.workers, "Worker threads")
		->envname("HEOM_WORKERS")
		->check(CLI::PositiveNumber);
	gen.physics.add_to(*generate_cmd);

	InspectFlags insp;
	auto* inspect_cmd = app.add_subcommand("inspect", "Verify a dataset and summarise it");
	inspect_cmd->add_option("path", insp.path, "Dataset directory")->required();

	ExportFlags exp;
	auto* export_cmd = app.add_subcommand("export", "Write dataset trajectories as CSV");
	export_cmd->add_option("path", exp.path, "Dataset directory")->required();
	export_cmd->add_option("--window-fs", exp.window_fs, "Keep only the first window of each trajectory [fs]")
		->check(CLI::PositiveNumber);
	export_cmd->add_option("--out", exp.out, "Output CSV, or directory with --per-sample (stdout if omitted)");
	auto* sample_opt = export_cmd->add_option("--sample", exp.sample, "Export a single sample_id");
	auto* per_sample_opt = export_cmd->add_flag("--per-sample", exp.per_sample, "One CSV per sample inside --out");
	sample_opt->excludes(per_sample_opt);

	std::vector<const char*> argv;
	for (const auto& a : args)
		argv.push_back(a.c_str());
	if (argv.empty())
		argv.push_back("heomctl");

	try {
		app.parse(static_cast<int>(argv.size()), argv.data());
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e, out, err);
	} catch (const CLI::CallForVersion& e) {
		return app.exit(e, out, err);
	} catch (const CLI::ParseError& e) {
		err << "error: " << e.what() << "\n\n";
		const auto subs = app.get_subcommands();
		err << (subs.empty() ? app.help() : subs.front()->help());
		return usage_error;
	}

	try {
		if (simulate_cmd->parsed())
			return simulate(sim, out, err);
		if (generate_cmd->parsed())
			return generate(gen, out, err);
		if (inspect_cmd->parsed())
			return inspect(insp, out);
		return export_csv(exp, out, err);
	} catch (const invalid_input& e) {
		err << "error: " << e.what() << '\n';
		return usage_error;
	} catch (const divergence_error& e) {
		err << "error: simulation diverged: " << e.what() << '\n';
		return runtime_failure;
	} catch (const corruption_error& e) {
		err << "error: corrupted dataset: " << e.what() << '\n';
		return runtime_failure;
	} catch (const unsupported_format& e) {
		err << "error: unsupported format: " << e.what() << '\n';
		return runtime_failure;
	} catch (const std::exception& e) {
		err << "error: " << e.what() << '\n';
		return runtime_failure;
	}
}

} // namespace heom::cli
