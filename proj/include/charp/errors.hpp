#pragma once

#include <stdexcept>
#include <string>

namespace charp {

// Error categories; the CLI maps them to exit codes
// (parse=5, precondition=2, budget=3, verify-fail=4).
enum class errc { parse, precondition, budget, verify_fail, internal };

class error : public std::runtime_error {
public:
    error(errc cat, const std::string& what) : std::runtime_error(what), cat_(cat) {}
    errc category() const { return cat_; }

private:
    errc cat_;
};

[[noreturn]] inline void fail_parse(const std::string& msg) { throw error(errc::parse, msg); }
[[noreturn]] inline void fail_pre(const std::string& msg) { throw error(errc::precondition, msg); }
[[noreturn]] inline void fail_budget(const std::string& msg) { throw error(errc::budget, msg); }
[[noreturn]] inline void fail_verify(const std::string& msg) { throw error(errc::verify_fail, msg); }
[[noreturn]] inline void fail_internal(const std::string& msg) { throw error(errc::internal, msg); }

} // namespace charp
