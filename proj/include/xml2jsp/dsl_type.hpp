#pragma once

#include <string>

namespace xml2jsp {

/// Types of the tag dialect. Arrays are one-dimensional, so an array's
/// element kind is always a scalar.
struct DslType {
    enum class Kind { Int, Real, String, ArrayOf, Connection, PreparedStmt, ResultCount, Object, Void };

    Kind kind = Kind::Int;
    Kind element = Kind::Int;  // ArrayOf only
    std::string class_name;    // Object only

    static DslType int_type() { return {Kind::Int, Kind::Int, {}}; }
    static DslType real_type() { return {Kind::Real, Kind::Int, {}}; }
    static DslType string_type() { return {Kind::String, Kind::Int, {}}; }
    static DslType array_of(Kind elem) { return {Kind::ArrayOf, elem, {}}; }
    static DslType object(std::string cls) { return {Kind::Object, Kind::Int, std::move(cls)}; }
    static DslType of(Kind k) { return {k, Kind::Int, {}}; }

    friend bool operator==(const DslType&, const DslType&) = default;
};

std::string to_string(const DslType& t);

/// Java spelling of a type: int, double, String, int[], Connection, ...
std::string java_type(const DslType& t);

}  // namespace xml2jsp
