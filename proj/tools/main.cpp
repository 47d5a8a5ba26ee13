#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sitcov/grid.hpp"
#include "sitcov/modelio.hpp"
#include "sitcov/pods.hpp"
#include "sitcov/requirements.hpp"

namespace {

// 0 = success, 1 = validation/domain error, 2 = usage error, 3 = I/O error.
constexpr int kExitSuccess = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return std::move(buffer).str();
}

/// Payloads are fully materialized before the first byte is written, so a
/// failing command never emits partial output.
void write_payload(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw IoError("cannot write " + out_path);
}

sitcov::NoiseFactorModel load_model(const std::string& path) {
    return sitcov::parse_model(read_file(path));
}

int run_validate(const std::string& model_path) {
    const std::string bytes = read_file(model_path);
    try {
        sitcov::parse_model(bytes);
    } catch (const sitcov::ValidationFailedError& e) {
        for (const sitcov::ValidationIssue& issue : e.issues()) {
            std::cerr << sitcov::to_string(issue.code) << " " << issue.path << ": "
                      << issue.message << "\n";
        }
        return kExitDomain;
    }
    write_payload("", "OK\n");
    return kExitSuccess;
}

int run_expand(const std::string& model_path, const std::string& type_name,
               const std::string& format, const std::string& out_path, unsigned jobs) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    const sitcov::SituationGrid grid = sitcov::expand(model, type_name, jobs);
    write_payload(out_path, format == "csv" ? grid_to_csv(grid) : grid_to_json(grid));
    return kExitSuccess;
}

int run_count(const std::string& model_path, const std::string& type_name) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    std::string payload;
    if (!type_name.empty()) {
        const sitcov::GridStats stats = sitcov::count(model, type_name);
        payload = stats.type_name + " unpruned=" + std::to_string(stats.unpruned_count) +
                  " pruned=" + std::to_string(stats.pruned_count) + "\n";
    } else {
        for (const sitcov::FactorType& type : model.types) {
            const sitcov::GridStats stats = sitcov::count(model, type.name);
            payload += stats.type_name + " unpruned=" + std::to_string(stats.unpruned_count) +
                       " pruned=" + std::to_string(stats.pruned_count) + "\n";
        }
        const sitcov::GlobalIndexSpace space = sitcov::make_index_space(model);
        payload += "GLOBAL total=" + std::to_string(space.total) + "\n";
    }
    write_payload("", payload);
    return kExitSuccess;
}

int run_situation(const std::string& model_path, std::uint64_t gid) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    const sitcov::GlobalIndexSpace space = sitcov::make_index_space(model);
    const std::vector<std::uint64_t> tuple = sitcov::global_to_tuple(space, gid);

    std::string payload = "gid " + std::to_string(gid) + "\n";
    payload += "tuple ";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i > 0) payload += ',';
        payload += std::to_string(tuple[i]);
    }
    payload += '\n';
    for (std::size_t i = 0; i < model.types.size(); ++i) {
        const sitcov::FactorType& type = model.types[i];
        const sitcov::Situation row = sitcov::row_by_id(model, type.name, tuple[i]);
        payload += type.name + " row " + std::to_string(tuple[i]) + ":";
        for (std::size_t f = 0; f < row.assignments.size(); ++f) {
            payload += f == 0 ? " " : "; ";
            payload += type.factors[f].name + "=" + row.assignments[f].state;
        }
        payload += '\n';
    }
    write_payload("", payload);
    return kExitSuccess;
}

int run_coverage(const std::string& model_path, const std::string& reqs_path,
                 const std::string& type_name) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    const std::vector<sitcov::RequirementSpec> specs =
        sitcov::parse_requirements(read_file(reqs_path));
    const sitcov::GridSet grids = sitcov::expand_all(model);
    const std::vector<sitcov::RobustnessRequirement> requirements =
        sitcov::bind_requirements(grids, specs);
    const sitcov::SituationGrid* grid = grids.find(type_name);
    if (grid == nullptr) throw sitcov::UnknownTypeError(type_name);
    const sitcov::CoverageReport report = sitcov::coverage_report(requirements, *grid);

    std::string payload = "type " + report.type_name + "\n";
    payload += "coverage " + std::to_string(report.covered.size()) + "/" +
               std::to_string(report.grid_size) + (report.complete() ? " COMPLETE" : " INCOMPLETE") +
               "\n";
    payload += "ratio " + report.ratio.text() + " (" + report.ratio.decimal() + ")\n";
    if (!report.uncovered.empty()) {
        payload += "uncovered: ";
        for (std::size_t i = 0; i < report.uncovered.size(); ++i) {
            if (i > 0) payload += ',';
            payload += std::to_string(report.uncovered[i]);
        }
        payload += '\n';
    }
    write_payload("", payload);
    return kExitSuccess;
}

int run_emit(const std::string& model_path, const std::string& reqs_path, const std::string& format,
             const std::string& out_path) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    const std::vector<sitcov::RequirementSpec> specs =
        sitcov::parse_requirements(read_file(reqs_path));
    const sitcov::GridSet grids = sitcov::expand_all(model);
    const std::vector<sitcov::RobustnessRequirement> requirements =
        sitcov::bind_requirements(grids, specs);

    sitcov::EmitFormat emit_format = sitcov::EmitFormat::Markdown;
    if (format == "json") emit_format = sitcov::EmitFormat::Json;
    if (format == "csv") emit_format = sitcov::EmitFormat::Csv;
    write_payload(out_path, sitcov::emit(requirements, grids, emit_format));
    return kExitSuccess;
}

int run_sample(const std::string& model_path, const std::string& type_name, bool global,
               std::uint64_t n, std::uint64_t seed) {
    const sitcov::NoiseFactorModel model = load_model(model_path);
    std::uint64_t total = 0;
    if (global) {
        total = sitcov::make_index_space(model).total;
    } else {
        total = sitcov::count(model, type_name).pruned_count;
    }
    const std::vector<std::uint64_t> ids = sitcov::sample_ids(total, n, seed);
    std::string payload;
    for (const std::uint64_t id : ids) payload += std::to_string(id) + "\n";
    write_payload("", payload);
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Situation coverage grids and robustness requirements "
                 "from a declarative camera noise-factor model"};
    app.name("sitcov");
    app.require_subcommand(1);

    std::string model_path;
    std::string reqs_path;
    std::string type_name;
    std::string format;
    std::string out_path;
    unsigned jobs = 1;
    std::uint64_t gid = 0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    bool global = false;

    CLI::App* validate = app.add_subcommand("validate", "Check a model document");
    validate->add_option("model", model_path, "model JSON file")->required();

    CLI::App* expand = app.add_subcommand("expand", "Write one type's coverage grid");
    expand->add_option("model", model_path, "model JSON file")->required();
    expand->add_option("--type", type_name, "factor type name")->required();
    expand->add_option("--format", format, "output format")
        ->required()
        ->check(CLI::IsMember({"csv", "json"}));
    expand->add_option("-o", out_path, "output file (default: stdout)");
    expand->add_option("--jobs", jobs, "worker threads for expansion")
        ->check(CLI::Range(1u, 64u));

    CLI::App* count = app.add_subcommand("count", "Print grid sizes");
    count->add_option("model", model_path, "model JSON file")->required();
    count->add_option("--type", type_name, "restrict to one factor type");

    CLI::App* situation = app.add_subcommand("situation", "Resolve a global situation id");
    situation->add_option("model", model_path, "model JSON file")->required();
    situation->add_option("--global-id", gid, "1-based global situation id")->required();

    CLI::App* coverage = app.add_subcommand("coverage", "Report POD coverage of one type's grid");
    coverage->add_option("model", model_path, "model JSON file")->required();
    coverage->add_option("reqs", reqs_path, "requirements JSON file")->required();
    coverage->add_option("--type", type_name, "factor type name")->required();

    CLI::App* emit = app.add_subcommand("emit", "Render the requirements document");
    emit->add_option("model", model_path, "model JSON file")->required();
    emit->add_option("reqs", reqs_path, "requirements JSON file")->required();
    emit->add_option("--format", format, "output format")
        ->required()
        ->check(CLI::IsMember({"md", "json", "csv"}));
    emit->add_option("-o", out_path, "output file (default: stdout)");

    CLI::App* sample = app.add_subcommand("sample", "Draw row ids without replacement");
    sample->add_option("model", model_path, "model JSON file")->required();
    CLI::Option* sample_type = sample->add_option("--type", type_name, "factor type name");
    CLI::Option* sample_global =
        sample->add_flag("--global", global, "sample global situation ids");
    sample_type->excludes(sample_global);
    sample_global->excludes(sample_type);
    sample->add_option("--n", n, "how many ids")->required();
    sample->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (validate->parsed()) return run_validate(model_path);
        if (expand->parsed()) return run_expand(model_path, type_name, format, out_path, jobs);
        if (count->parsed()) return run_count(model_path, type_name);
        if (situation->parsed()) return run_situation(model_path, gid);
        if (coverage->parsed()) return run_coverage(model_path, reqs_path, type_name);
        if (emit->parsed()) return run_emit(model_path, reqs_path, format, out_path);
        if (sample->parsed()) {
            if (!global && type_name.empty()) {
                std::cerr << "sample: pass exactly one of --type or --global\n";
                return kExitUsage;
            }
            return run_sample(model_path, type_name, global, n, seed);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const sitcov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
