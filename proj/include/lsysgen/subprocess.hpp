#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace lsysgen {

struct ProcessResult {
    bool started = false;
    int exitCode = -1; // 128 + signal when killed by a signal
    std::string out;
    std::string err;
    double elapsedMs = 0;

    bool ok() const noexcept { return started && exitCode == 0; }
};

/// Runs argv[0] (PATH lookup) with captured stdout/stderr. Timing covers
/// spawn to reap on the monotonic clock.
ProcessResult run_process(const std::vector<std::string>& argv, const std::filesystem::path& cwd = {});

/// Runs a command line through /bin/sh -c.
ProcessResult run_shell(const std::string& command, const std::filesystem::path& cwd = {});

/// Single-quotes a word for /bin/sh.
std::string shell_quote(const std::string& word);

/// Creates a fresh directory under the system temp directory.
std::filesystem::path make_temp_dir(const std::string& prefix);

/// Uses `dir` when given; otherwise creates a temporary directory that is
/// removed again on destruction.
class WorkDir {
public:
    WorkDir(const std::filesystem::path& dir, const std::string& prefix);
    ~WorkDir();
    WorkDir(const WorkDir&) = delete;
    WorkDir& operator=(const WorkDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    bool owned_ = false;
};

} // namespace lsysgen
