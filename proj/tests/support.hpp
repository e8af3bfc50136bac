#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "ocrbench/core_model.hpp"
#include "ocrbench/ingest.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return OCRBENCH_TEST_DATA_DIR; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("ocrbench-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

private:
    std::filesystem::path path_;
};

inline ocrbench::WordBox word(const std::string& text, double x, double y, double w = 40, double h = 10) {
    return ocrbench::WordBox(text, ocrbench::Rect{x, y, w, h});
}

inline ocrbench::OcrDocument doc_of(std::vector<ocrbench::WordBox> words, std::string id = "doc") {
    ocrbench::OcrDocument d;
    d.image_id = std::move(id);
    d.engine_id = "test";
    d.words = std::move(words);
    return d;
}

inline std::vector<std::string> texts(const std::vector<ocrbench::WordBox>& words) {
    std::vector<std::string> out;
    for (const auto& w : words) out.push_back(w.text());
    return out;
}

} // namespace testsupport
