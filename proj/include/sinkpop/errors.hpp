#ifndef SINKPOP_ERRORS_HPP
#define SINKPOP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace sinkpop {

enum class ErrorCode {
    ParseError,
    DuplicateSelfLoop,
    IndexOutOfRange,
    NotInClassS,
    NotASubgraph,
    PopCapExceeded,
    TooLarge,
    GenerationFailed,
    NoSpanningTree,
    TooFewSamples,
    UnknownExperiment,
    SolveFailed,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Thrown when a sampler is handed a graph with a tree component.
/// Carries the offending components so callers can name them.
class NotInClassSError : public Error {
public:
    NotInClassSError(const std::string& what,
                     std::vector<std::vector<int>> tree_components)
        : Error(ErrorCode::NotInClassS, what),
          tree_components_(std::move(tree_components)) {}

    const std::vector<std::vector<int>>& tree_components() const {
        return tree_components_;
    }

private:
    std::vector<std::vector<int>> tree_components_;
};

} // namespace sinkpop

#endif
