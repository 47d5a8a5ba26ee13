#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "sitcov/grid.hpp"
#include "sitcov/reference.hpp"
#include "test_support.hpp"

using namespace sitcov;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> labels_of(const Situation& row) {
    std::vector<std::string> labels;
    for (const Assignment& assignment : row.assignments) labels.push_back(assignment.state);
    return labels;
}

Factor binary_factor(std::string id) {
    Factor factor;
    factor.id = id;
    factor.name = "Factor " + id;
    factor.states = {{"False", true}, {"True", false}};
    return factor;
}

NoiseFactorModel pair_model(ConstraintKind kind) {
    NoiseFactorModel model;
    model.name = "pair";
    model.version = "1";
    FactorType type;
    type.name = "T";
    type.factors = {binary_factor("a"), binary_factor("b")};
    model.types.push_back(type);
    model.constraints.push_back({kind, "a", "b", ""});
    return model;
}

/// Test-side full product of state labels, nesting left to right.
std::vector<std::vector<std::string>> label_product(const FactorType& type) {
    std::vector<std::vector<std::string>> out(1);
    for (const Factor& factor : type.factors) {
        std::vector<std::vector<std::string>> next;
        next.reserve(out.size() * factor.states.size());
        for (const std::vector<std::string>& prefix : out) {
            for (const StateDef& state : factor.states) {
                std::vector<std::string> row = prefix;
                row.push_back(state.label);
                next.push_back(std::move(row));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("bundled model expands to the expected grid sizes") {
    const NoiseFactorModel& model = reference_model();
    const std::vector<std::pair<std::string, std::uint64_t>> expected = {
        {"Piece to Piece", 72}, {"Change over Time", 36}, {"Usage", 108},
        {"Environment", 12},    {"System Interaction", 24},
    };
    for (const auto& [type_name, size] : expected) {
        const SituationGrid grid = expand(model, type_name);
        CHECK(grid.rows.size() == size);
        CHECK(sitcov::count(model, type_name).pruned_count == size);
    }
}

TEST_CASE("usage grid counts show the implication pruning") {
    const GridStats stats = sitcov::count(reference_model(), "Usage");
    CHECK(stats.unpruned_count == 144);
    CHECK(stats.pruned_count == 108);
    CHECK(stats.pruned_away == 36);
}

TEST_CASE("unconstrained types prune nothing") {
    const GridStats stats = sitcov::count(reference_model(), "Piece to Piece");
    CHECK(stats.unpruned_count == 72);
    CHECK(stats.pruned_count == 72);
    CHECK(stats.pruned_away == 0);
}

TEST_CASE("usage CSV fixture rows are byte-exact") {
    const std::string csv = grid_to_csv(expand(reference_model(), "Usage"));
    const std::vector<std::string> lines = split_lines(csv);
    REQUIRE(lines.size() == 109);
    CHECK(lines[0] ==
          "ID,Misplacement of Sensor,Vehicle Impact,Chemicals / Contaminants,Obstructions,"
          "Lens Scratch,Vehicle Dynamic Settings");
    CHECK(lines[1] == "1,False,False,False,False,False,False");
    CHECK(lines[2] == "2,False,False,False,False,False,True");
    CHECK(lines[3] == "3,False,False,False,False,Low,False");
    CHECK(lines[108] == "108,True,True,True,High,High,True");
    CHECK(csv.back() == '\n');
}

TEST_CASE("factor names containing commas are quoted in CSV headers") {
    const std::string csv = grid_to_csv(expand(reference_model(), "Piece to Piece"));
    CHECK(split_lines(csv)[0].find("\"Lens Shape, Purity\"") != std::string::npos);
}

TEST_CASE("CSV quoting doubles embedded quotes") {
    NoiseFactorModel model = pair_model(ConstraintKind::Note);
    model.types[0].factors[0].name = "He said \"hi\", twice";
    model.types[0].factors[0].states[1].label = "a,b";
    const std::string csv = grid_to_csv(expand(model, "T"));
    const std::vector<std::string> lines = split_lines(csv);
    CHECK(lines[0] == "ID,\"He said \"\"hi\"\", twice\",Factor b");
    CHECK(lines[2] == "2,False,True");
    CHECK(lines[3] == "3,\"a,b\",False");
}

TEST_CASE("grid JSON lists rows as id plus assignments") {
    const SituationGrid grid = expand(reference_model(), "Usage");
    const std::string text = grid_to_json(grid);
    CHECK(text.substr(0, 4) == "[\n  ");
    CHECK(text.back() == '\n');
    const auto doc = nlohmann::ordered_json::parse(text);
    REQUIRE(doc.size() == 108);
    CHECK(doc[0]["id"] == 1);
    CHECK(doc[0]["assignments"]["misplacement"] == "False");
    CHECK(doc[107]["id"] == 108);
    CHECK(doc[107]["assignments"]["lens_scratch"] == "High");
}

TEST_CASE("hardening every co-occurrence dependency shrinks usage to 70 rows") {
    NoiseFactorModel model = reference_model();
    for (Constraint& constraint : model.constraints) {
        if (model.types[2].find_factor(constraint.source) != nullptr) {
            constraint.kind = ConstraintKind::Requires;
        }
    }
    const SituationGrid grid = expand(model, "Usage");
    CHECK(grid.rows.size() == 70);
    CHECK(grid == oracle_expand(model, "Usage"));
}

TEST_CASE("a single binary factor yields its two states in order") {
    NoiseFactorModel model;
    model.name = "one";
    model.version = "1";
    FactorType type;
    type.name = "T";
    type.factors = {binary_factor("a")};
    model.types.push_back(type);

    const SituationGrid grid = expand(model, "T");
    REQUIRE(grid.rows.size() == 2);
    CHECK(labels_of(grid.rows[0]) == std::vector<std::string>{"False"});
    CHECK(labels_of(grid.rows[1]) == std::vector<std::string>{"True"});
}

TEST_CASE("excludes removes exactly the both-active combination") {
    const SituationGrid grid = expand(pair_model(ConstraintKind::Excludes), "T");
    REQUIRE(grid.rows.size() == 3);
    CHECK(labels_of(grid.rows[0]) == std::vector<std::string>{"False", "False"});
    CHECK(labels_of(grid.rows[1]) == std::vector<std::string>{"False", "True"});
    CHECK(labels_of(grid.rows[2]) == std::vector<std::string>{"True", "False"});
}

TEST_CASE("requires removes exactly the active-without-target combination") {
    const SituationGrid grid = expand(pair_model(ConstraintKind::Requires), "T");
    REQUIRE(grid.rows.size() == 3);
    CHECK(labels_of(grid.rows[0]) == std::vector<std::string>{"False", "False"});
    CHECK(labels_of(grid.rows[1]) == std::vector<std::string>{"False", "True"});
    CHECK(labels_of(grid.rows[2]) == std::vector<std::string>{"True", "True"});
}

TEST_CASE("contradictory constraints still leave the all-baseline row") {
    NoiseFactorModel model = pair_model(ConstraintKind::Requires);
    model.constraints.push_back({ConstraintKind::Excludes, "a", "b", ""});
    model.constraints.push_back({ConstraintKind::Requires, "b", "a", ""});
    const SituationGrid grid = expand(model, "T");
    REQUIRE(grid.rows.size() == 1);
    CHECK(labels_of(grid.rows[0]) == std::vector<std::string>{"False", "False"});
    const GridStats stats = sitcov::count(model, "T");
    CHECK(stats.pruned_count == 1);
    CHECK(stats.pruned_away == 3);
}

TEST_CASE("unknown type names are rejected everywhere") {
    const NoiseFactorModel& model = reference_model();
    CHECK_THROWS_AS(expand(model, "Nope"), UnknownTypeError);
    CHECK_THROWS_AS(sitcov::count(model, "Nope"), UnknownTypeError);
    CHECK_THROWS_AS(oracle_expand(model, "Nope"), UnknownTypeError);
    CHECK_THROWS_AS(row_by_id(model, "Nope", 1), UnknownTypeError);
}

TEST_CASE("expansion equals the brute-force oracle on the bundled model") {
    const NoiseFactorModel& model = reference_model();
    for (const FactorType& type : model.types) {
        CHECK(expand(model, type.name) == oracle_expand(model, type.name));
    }
}

TEST_CASE("expansion equals the brute-force oracle on 1000 randomized models") {
    testsupport::Rng rng(7001);
    for (int i = 0; i < 1000; ++i) {
        const NoiseFactorModel model = testsupport::random_model(rng);
        for (const FactorType& type : model.types) {
            const SituationGrid fast = expand(model, type.name);
            const SituationGrid brute = oracle_expand(model, type.name);
            REQUIRE(fast == brute);
        }
    }
}

TEST_CASE("randomized grids keep ordering, soundness, completeness, and baseline row 1") {
    testsupport::Rng rng(7002);
    for (int i = 0; i < 1000; ++i) {
        const NoiseFactorModel model = testsupport::random_model(rng);
        for (const FactorType& type : model.types) {
            const SituationGrid grid = expand(model, type.name);
            REQUIRE_FALSE(grid.rows.empty());
            CHECK(sitcov::count(model, type.name).pruned_count == grid.rows.size());

            // Row 1 is the all-baseline assignment.
            for (std::size_t f = 0; f < type.factors.size(); ++f) {
                const std::size_t baseline = type.factors[f].baseline_index();
                CHECK(grid.rows[0].assignments[f].state == type.factors[f].states[baseline].label);
            }

            // Strictly increasing mixed-radix keys, hence no duplicates.
            for (std::size_t r = 0; r + 1 < grid.rows.size(); ++r) {
                CHECK(testsupport::ordinal_key(type, grid.rows[r]) <
                      testsupport::ordinal_key(type, grid.rows[r + 1]));
            }

            // Sound: every emitted row passes an independent constraint check.
            std::set<std::vector<std::string>> emitted;
            for (const Situation& row : grid.rows) {
                CHECK(testsupport::row_satisfies_hard_constraints(model, type, row));
                emitted.insert(labels_of(row));
            }

            // Complete: a full-product assignment is emitted iff it passes.
            for (const std::vector<std::string>& labels : label_product(type)) {
                Situation candidate;
                for (std::size_t f = 0; f < labels.size(); ++f) {
                    candidate.assignments.push_back({type.factors[f].id, labels[f]});
                }
                const bool valid =
                    testsupport::row_satisfies_hard_constraints(model, type, candidate);
                CHECK(emitted.contains(labels) == valid);
            }
        }
    }
}

TEST_CASE("note constraints never affect expansion") {
    testsupport::Rng rng(7003);
    for (int i = 0; i < 1000; ++i) {
        const NoiseFactorModel model = testsupport::random_model(rng);
        NoiseFactorModel stripped = model;
        std::erase_if(stripped.constraints, [](const Constraint& constraint) {
            return constraint.kind == ConstraintKind::Note;
        });
        for (const FactorType& type : model.types) {
            CHECK(expand(model, type.name) == expand(stripped, type.name));
        }
    }
}

TEST_CASE("adding a hard constraint never grows the grid") {
    testsupport::Rng rng(7004);
    int cases = 0;
    while (cases < 1000) {
        const NoiseFactorModel model = testsupport::random_model(rng);
        const FactorType* type = nullptr;
        for (const FactorType& candidate : model.types) {
            if (candidate.factors.size() >= 2) {
                type = &candidate;
                break;
            }
        }
        if (type == nullptr) continue;
        const std::uint64_t before = sitcov::count(model, type->name).pruned_count;

        NoiseFactorModel tightened = model;
        const std::size_t a = testsupport::pick(rng, 0, type->factors.size() - 1);
        std::size_t b = a;
        while (b == a) b = testsupport::pick(rng, 0, type->factors.size() - 1);
        tightened.constraints.push_back(
            {rng() % 2 == 0 ? ConstraintKind::Requires : ConstraintKind::Excludes,
             type->factors[a].id, type->factors[b].id, ""});
        CHECK(sitcov::count(tightened, type->name).pruned_count <= before);
        ++cases;
    }
}

TEST_CASE("parallel expansion merges into the sequential order") {
    const NoiseFactorModel& model = reference_model();
    for (const FactorType& type : model.types) {
        CHECK(expand(model, type.name, 4) == expand(model, type.name, 1));
    }

    // Large enough to actually split across workers, with a pruning constraint
    // whose matches straddle chunk boundaries.
    NoiseFactorModel wide;
    wide.name = "wide";
    wide.version = "1";
    FactorType type;
    type.name = "W";
    for (int f = 0; f < 12; ++f) type.factors.push_back(binary_factor("w" + std::to_string(f)));
    wide.types.push_back(type);
    wide.constraints.push_back({ConstraintKind::Requires, "w0", "w11", ""});
    wide.constraints.push_back({ConstraintKind::Excludes, "w5", "w6", ""});

    const SituationGrid sequential = expand(wide, "W", 1);
    for (const unsigned jobs : {2u, 3u, 5u, 8u}) {
        CHECK(expand(wide, "W", jobs) == sequential);
    }
    CHECK(grid_to_csv(expand(wide, "W", 5)) == grid_to_csv(sequential));
}

TEST_CASE("rows can be fetched by id without materializing the grid") {
    const NoiseFactorModel& model = reference_model();
    const SituationGrid grid = expand(model, "Usage");
    for (const std::uint64_t id : {1ull, 2ull, 3ull, 54ull, 108ull}) {
        CHECK(row_by_id(model, "Usage", id) == grid.rows[id - 1]);
        CHECK(row_by_id(grid, id) == grid.rows[id - 1]);
    }
    CHECK(labels_of(row_by_id(model, "Usage", 108)) ==
          std::vector<std::string>{"True", "True", "True", "High", "High", "True"});
}

TEST_CASE("row ids outside the pruned range are rejected") {
    const NoiseFactorModel& model = reference_model();
    CHECK_THROWS_AS(row_by_id(model, "Usage", 0), OutOfRangeError);
    CHECK_THROWS_AS(row_by_id(model, "Usage", 109), OutOfRangeError);
    try {
        row_by_id(model, "Usage", 109);
    } catch (const OutOfRangeError& e) {
        CHECK(e.value() == 109);
        CHECK(e.max() == 108);
        CHECK(std::string(e.what()) == "id 109 out of range [1, 108]");
    }
    const SituationGrid grid = expand(model, "Environment");
    CHECK_THROWS_AS(row_by_id(grid, 13), OutOfRangeError);
}

TEST_CASE("row lookup agrees with expansion on randomized models") {
    testsupport::Rng rng(7005);
    for (int i = 0; i < 300; ++i) {
        const NoiseFactorModel model = testsupport::random_model(rng);
        for (const FactorType& type : model.types) {
            const SituationGrid grid = expand(model, type.name);
            const std::uint64_t id = testsupport::pick(rng, 1, grid.rows.size());
            CHECK(row_by_id(model, type.name, id) == grid.rows[id - 1]);
        }
    }
}

TEST_CASE("the oracle refuses oversized instances, counting does not") {
    NoiseFactorModel model;
    model.name = "big";
    model.version = "1";
    FactorType type;
    type.name = "B";
    for (int f = 0; f < 20; ++f) type.factors.push_back(binary_factor("b" + std::to_string(f)));
    model.types.push_back(type);

    CHECK_THROWS_AS(oracle_expand(model, "B"), InstanceTooLargeError);
    try {
        oracle_expand(model, "B");
    } catch (const InstanceTooLargeError& e) {
        CHECK(e.unpruned() == 1048576);
        CHECK(e.limit() == kOracleLimit);
    }
    CHECK(sitcov::count(model, "B").pruned_count == 1048576);
}

TEST_CASE("astronomically large state spaces fail loudly instead of overflowing") {
    NoiseFactorModel model;
    model.name = "huge";
    model.version = "1";
    FactorType type;
    type.name = "H";
    for (int f = 0; f < 70; ++f) {
        Factor factor = binary_factor("h" + std::to_string(f));
        factor.states.push_back({"Extra", false});
        type.factors.push_back(factor);
    }
    model.types.push_back(type);
    CHECK_THROWS_AS(sitcov::count(model, "H"), Error);
}
