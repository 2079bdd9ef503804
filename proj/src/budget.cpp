#include "cantor/budget.hpp"

#include <cstdlib>
#include <string>

#include "cantor/errors.hpp"

namespace cantor {

namespace {

int read_env_budget() {
    const char* raw = std::getenv("CANTOR_BAYES_DEPTH_BUDGET");
    if (raw == nullptr || *raw == '\0') {
        return 24;
    }
    char* end = nullptr;
    const long value = std::strtol(raw, &end, 10);
    if (end == nullptr || *end != '\0' || value < 0 || value > 62) {
        throw ParseError(std::string("CANTOR_BAYES_DEPTH_BUDGET must be an "
                                     "integer in [0, 62], got: ") + raw);
    }
    return static_cast<int>(value);
}

int& budget_slot() {
    static int budget = read_env_budget();
    return budget;
}

}  // namespace

int depth_budget() {
    return budget_slot();
}

void set_depth_budget(int depth) {
    if (depth < 0 || depth > 62) {
        throw PreconditionError("depth budget must lie in [0, 62]");
    }
    budget_slot() = depth;
}

void require_enumerable(long depth, const char* what) {
    if (depth < 0) {
        throw PreconditionError(std::string(what) + ": negative depth");
    }
    if (depth > depth_budget()) {
        throw DepthBudgetError(std::string(what) + ": depth " +
                               std::to_string(depth) +
                               " exceeds the enumeration budget " +
                               std::to_string(depth_budget()));
    }
}

void require_word_length(long length, const char* what) {
    if (length < 0) {
        throw PreconditionError(std::string(what) + ": negative length");
    }
    if (length > kMaxWordLength) {
        throw DepthBudgetError(std::string(what) + ": length " +
                               std::to_string(length) +
                               " exceeds the word-length cap " +
                               std::to_string(kMaxWordLength));
    }
}

}  // namespace cantor
