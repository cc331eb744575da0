#pragma once

#include "lmd/typesystem.hpp"

namespace lmd {

// Records a judgment under construction for the duration of a scope.
class Checker::Frame {
public:
    Frame(Checker& c, Judgment j) : c_(c) { c_.frames_.push_back(std::move(j)); }
    ~Frame() { c_.frames_.pop_back(); }
    Frame(const Frame&) = delete;
    Frame& operator=(const Frame&) = delete;

private:
    Checker& c_;
};

}  // namespace lmd
