#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace compmdp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t col, std::string expected)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) +
                ": expected " + expected),
          line_(line), col_(col), expected_(std::move(expected)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t col() const noexcept { return col_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t line_;
    std::size_t col_;
    std::string expected_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

class ActionSetMismatch : public Error {
public:
    using Error::Error;
};

class UnboundName : public Error {
public:
    explicit UnboundName(const std::string& name)
        : Error("unbound name '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class WireCycle : public Error {
public:
    explicit WireCycle(std::size_t port)
        : Error("loop port " + std::to_string(port) + " lies on a cycle of bare wires"),
          port_(port) {}
    std::size_t port() const noexcept { return port_; }

private:
    std::size_t port_;
};

class SchedulerExplosion : public Error {
public:
    SchedulerExplosion(double count, std::size_t cap)
        : Error("component admits " + format_count(count) + " memoryless schedulers (cap " +
                std::to_string(cap) + ")"),
          count_(count), cap_(cap) {}
    double count() const noexcept { return count_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    static std::string format_count(double c) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.0f", c);
        return buf;
    }
    double count_;
    std::size_t cap_;
};

class FrozenMultiExit : public Error {
public:
    using Error::Error;
};

class EmptyFront : public Error {
public:
    using Error::Error;
};

class IncompleteScheduler : public Error {
public:
    using Error::Error;
};

class MalformedModel : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class Timeout : public Error {
public:
    using Error::Error;
};

}  // namespace compmdp
