#pragma once

#include <stdexcept>

namespace fondsp {

// A configured size bound was exceeded (grounding cap, oracle state bound).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace fondsp
