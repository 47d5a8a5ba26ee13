#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sitcov {

/// Base of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

class UnknownTypeError : public Error {
public:
    explicit UnknownTypeError(std::string_view type_name)
        : Error("unknown factor type: " + std::string(type_name)), type_name_(type_name) {}
    const std::string& type_name() const { return type_name_; }

private:
    std::string type_name_;
};

class UnknownStateError : public Error {
public:
    UnknownStateError(std::string_view factor_id, std::string_view label)
        : Error("factor \"" + std::string(factor_id) + "\" has no state \"" + std::string(label) + "\""),
          factor_id_(factor_id),
          label_(label) {}
    const std::string& factor_id() const { return factor_id_; }
    const std::string& label() const { return label_; }

private:
    std::string factor_id_;
    std::string label_;
};

class MissingChannelsError : public Error {
public:
    explicit MissingChannelsError(std::string_view factor_id)
        : Error("factor \"" + std::string(factor_id) + "\" has no channel tags"), factor_id_(factor_id) {}
    const std::string& factor_id() const { return factor_id_; }

private:
    std::string factor_id_;
};

class OutOfRangeError : public Error {
public:
    OutOfRangeError(std::uint64_t value, std::uint64_t max)
        : Error("id " + std::to_string(value) + " out of range [1, " + std::to_string(max) + "]"),
          value_(value),
          max_(max) {}
    std::uint64_t value() const { return value_; }
    std::uint64_t max() const { return max_; }

private:
    std::uint64_t value_;
    std::uint64_t max_;
};

class RowOutOfRangeError : public Error {
public:
    RowOutOfRangeError(std::string_view type_name, std::uint64_t row_id, std::uint64_t max)
        : Error("row " + std::to_string(row_id) + " out of range [1, " + std::to_string(max) +
                "] for type \"" + std::string(type_name) + "\""),
          type_name_(type_name),
          row_id_(row_id),
          max_(max) {}
    const std::string& type_name() const { return type_name_; }
    std::uint64_t row_id() const { return row_id_; }
    std::uint64_t max() const { return max_; }

private:
    std::string type_name_;
    std::uint64_t row_id_;
    std::uint64_t max_;
};

class InstanceTooLargeError : public Error {
public:
    InstanceTooLargeError(std::uint64_t unpruned, std::uint64_t limit)
        : Error("instance has " + std::to_string(unpruned) + " unpruned assignments, oracle limit is " +
                std::to_string(limit)),
          unpruned_(unpruned),
          limit_(limit) {}
    std::uint64_t unpruned() const { return unpruned_; }
    std::uint64_t limit() const { return limit_; }

private:
    std::uint64_t unpruned_;
    std::uint64_t limit_;
};

class NTooLargeError : public Error {
public:
    NTooLargeError(std::uint64_t n, std::uint64_t total)
        : Error("cannot draw " + std::to_string(n) + " ids without replacement from " +
                std::to_string(total)),
          n_(n),
          total_(total) {}
    std::uint64_t n() const { return n_; }
    std::uint64_t total() const { return total_; }

private:
    std::uint64_t n_;
    std::uint64_t total_;
};

class TypeMismatchError : public Error {
public:
    TypeMismatchError(std::string_view pod_type, std::string_view grid_type)
        : Error("POD targets type \"" + std::string(pod_type) + "\" but the grid is for type \"" +
                std::string(grid_type) + "\""),
          pod_type_(pod_type),
          grid_type_(grid_type) {}
    const std::string& pod_type() const { return pod_type_; }
    const std::string& grid_type() const { return grid_type_; }

private:
    std::string pod_type_;
    std::string grid_type_;
};

class UnboundPodError : public Error {
public:
    UnboundPodError(std::string_view label, std::string_view type_name)
        : Error("POD \"" + std::string(label) + "\" references type \"" + std::string(type_name) +
                "\" which has no expanded grid"),
          label_(label),
          type_name_(type_name) {}
    const std::string& label() const { return label_; }
    const std::string& type_name() const { return type_name_; }

private:
    std::string label_;
    std::string type_name_;
};

}  // namespace sitcov
