#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "navier/error.hpp"
#include "navier/grid.hpp"
#include "navier/homogenization.hpp"
#include "navier/symbols.hpp"

namespace navier::cli {

enum class Command { Solve, Factor, Navier, Equiv, Homogenize, Optimize, Nosol };

std::optional<Command> command_from_name(std::string_view name);
std::string_view command_name(Command c);

/// Every problem found while reading a config, one message per problem.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> messages);
    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    std::vector<std::string> messages_;
};

struct RhsSpec {
    enum class Kind { Constant, SinSin, File };
    Kind kind = Kind::Constant;
    double value = 1.0;  ///< constant value, or amplitude of sin(pi x) sin(pi y)
    std::string path;
};

struct WeightSpec {
    enum class Kind { Constant, File };
    Kind kind = Kind::Constant;
    double value = 0.0;
    std::string path;
};

struct RunConfig {
    Command command = Command::Solve;
    int nx = 33;
    int ny = 33;
    Rect rect{};

    std::optional<Quartic2> quartic;
    std::optional<Quadratic2> a;
    std::optional<Quadratic2> b;
    bool swap_order = false;  ///< order=ba: apply the factors the other way round

    std::string mask_expr = "full";
    Shape mask = Shape::full();
    WeightSpec weights;
    RhsSpec rhs;

    std::uint64_t seed = 42;
    int trials = 20;

    PerforationRule rule = PerforationRule::power(0.1, 1.0);
    std::vector<int> ns{2, 3, 4};

    std::string instance = "nosol";
    std::string target;
    int iters = 100;

    std::filesystem::path out = ".";

    /// The (A, B) pair to solve with: explicit, or the factors of the quartic.
    std::pair<Quadratic2, Quadratic2> operator_pair() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// key=value lines with `#` comments; `overrides` (from command-line flags)
/// win over file values. Throws ConfigError listing every problem.
RunConfig parse_config(std::string_view text, Command command, const Overrides& overrides = {});

/// Keys accepted in config files and as --key flags.
const std::vector<std::string>& known_keys();

/// Exit codes: 0 success, 1 solver error, 2 configuration error. Files are
/// written only after the computation succeeded.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace navier::cli
