#pragma once

#include <string>
#include <string_view>

namespace testgen::llm {

std::string sha256_hex(std::string_view data);

}  // namespace testgen::llm
