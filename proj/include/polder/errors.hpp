#pragma once

#include <stdexcept>
#include <string>

namespace polder {

/// Base class for all library errors.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Input outside the mathematical domain of an operation (negative temperature, eps <= 0, ...).
class domain_error : public error {
  public:
    explicit domain_error(const std::string& what) : error(what) {}
};

/// Evaluation requested exactly at (or too close to) a pole or an inversion singularity.
class singularity_error : public error {
  public:
    explicit singularity_error(const std::string& what) : error(what) {}
};

/// Argument outside a declared validity range while strict range checking is on.
class range_error : public error {
  public:
    explicit range_error(const std::string& what) : error(what) {}
};

/// A constructed model violates its own invariants; the message names the offending parameter.
class model_error : public error {
  public:
    explicit model_error(const std::string& what) : error(what) {}
};

/// A numerical routine could not reach the requested accuracy.
class accuracy_error : public error {
  public:
    accuracy_error(const std::string& what, double achieved)
        : error(what), achieved_bound(achieved) {}
    double achieved_bound;
};

/// Malformed input file; message carries field/line diagnostics.
class parse_error : public error {
  public:
    explicit parse_error(const std::string& what) : error(what) {}
};

/// Asymptotic extraction failed to find a plateau.
class extraction_error : public error {
  public:
    explicit extraction_error(const std::string& what) : error(what) {}
};

} // namespace polder
