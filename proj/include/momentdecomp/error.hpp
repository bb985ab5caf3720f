#ifndef MOMENTDECOMP_ERROR_HPP_
#define MOMENTDECOMP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace momentdecomp {

enum class ErrorKind {
  kInvalidArgument,  // non-finite input, order out of range, mismatched P
  kNoRemainder,      // subtraction leaves an empty group
  kInconsistent,     // statistics cannot come from a real sample
  kUndefined,        // statistic undefined for this group (n too small, zero variance)
  kParse,            // malformed input text
  kIo,
};

// Single exception type for the library; callers branch on kind().
class StatsError : public std::runtime_error {
 public:
  StatsError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace momentdecomp

#endif  // MOMENTDECOMP_ERROR_HPP_
