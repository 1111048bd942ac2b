#pragma once

#include <string>
#include <string_view>

namespace topicmine {

// Rule-based English suffix stripping following Porter's original 1980
// algorithm (steps 1a through 5b). Input is expected lowercase ASCII; words
// of length <= 2 and words containing non-letters are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace topicmine
