#pragma once

#include <string>

namespace newsdig {

// Decodes UTF-8 into Unicode scalar values. Malformed byte sequences decode
// to U+FFFD, one replacement per rejected byte.
std::u32string utf8_decode(const std::string& s);

std::string utf8_encode(const std::u32string& s);

}  // namespace newsdig
