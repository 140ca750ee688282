/*
 * Copyright 2025 the qcomb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qcomb {

/// Error type thrown by every module on contract violation.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

template <typename... Parts>
[[noreturn]] inline void fail(Parts&&... parts) {
    std::ostringstream oss;
    (oss << ... << parts);
    throw error(oss.str());
}

template <typename... Parts>
inline void require(bool cond, Parts&&... parts) {
    if (!cond) fail(std::forward<Parts>(parts)...);
}

namespace log {

inline int& verbosity() {
    static int level = 1;  // 0 = silent, 1 = warnings, 2 = info
    return level;
}

inline std::mutex& mtx() {
    static std::mutex m;
    return m;
}

template <typename... Parts>
inline void warn(Parts&&... parts) {
    if (verbosity() < 1) return;
    std::lock_guard<std::mutex> lock(mtx());
    std::ostringstream oss;
    (oss << ... << parts);
    std::cerr << "[warn] " << oss.str() << "\n";
}

template <typename... Parts>
inline void info(Parts&&... parts) {
    if (verbosity() < 2) return;
    std::lock_guard<std::mutex> lock(mtx());
    std::ostringstream oss;
    (oss << ... << parts);
    std::cerr << "[info] " << oss.str() << "\n";
}

}  // namespace log

}  // namespace qcomb
