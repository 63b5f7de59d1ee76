#pragma once

#include "chorefair/core.hpp"
#include "chorefair/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chorefair {

// A Partition multiset p_1..p_r. `labels`, when present, is a claimed
// solution: labels[j] is the index of the part holding p_j. Generators use
// it only to build the yes-witness and reject it if the parts are unequal.
struct PartitionInput {
    std::vector<std::int64_t> values;
    std::optional<std::vector<int>> labels;
};

// Throws ParameterError on an empty multiset, a non-positive value or an
// odd total.
void check_partition_input(const PartitionInput& p);
// Half the total.
Integer partition_target(const PartitionInput& p);

// Appends k - 2 copies of SUM/2, turning a two-way Partition input into a
// k-way one with the same answer. Labels, if any, send each copy to its own
// new part 2, 3, ..., k - 1. Requires k >= 2.
PartitionInput pad_partition(const PartitionInput& p, std::size_t k);

struct GeneratedInstance {
    Instance instance;  // unnormalized, as constructed
    std::string family;
    io::Json params;
    Rational row_sum;
    std::map<std::string, Rational> expected;
    std::optional<Rational> threshold;
    std::optional<Allocation> witness;
};

// Instance JSON with the metadata under "meta".
io::Json to_json(const GeneratedInstance& generated);

GeneratedInstance gen_eqx_cof(std::size_t n, const Rational& K);
GeneratedInstance gen_eqx_hard(const PartitionInput& p, std::size_t n, const Rational& K);
GeneratedInstance gen_eq1_cof(std::size_t n, const Rational& eps);
GeneratedInstance gen_eq1_hard(const PartitionInput& p, std::size_t n, const Rational& K);
GeneratedInstance gen_ef1_cof(std::size_t n, std::size_t K, const Rational& eps);
GeneratedInstance gen_ef1_hard(const PartitionInput& p, std::size_t n, const Rational& K);
GeneratedInstance gen_ef1_two_agent_hard(const PartitionInput& p, const Rational& K);
GeneratedInstance gen_ef1_mult_hard(const PartitionInput& p, std::size_t n, const Rational& K);

// Costs drawn uniformly from {0, 1/g, ..., 1} with mt19937_64 and portable
// rejection sampling; all-zero rows are redrawn when m > 0.
GeneratedInstance gen_random(std::size_t n, std::size_t m, std::uint64_t seed,
                             std::uint64_t granularity);

} // namespace chorefair
