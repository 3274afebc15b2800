#pragma once

// Output plumbing shared by the subcommands: CSV assembly, destination
// handling, run manifests and optional gnuplot companion scripts.

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace plike::cli {

class CsvBuilder {
public:
    explicit CsvBuilder(std::vector<std::string> columns);

    void row(std::initializer_list<double> values);
    void row_mixed(const std::vector<std::string>& fields);
    const std::string& text() const noexcept { return text_; }
    std::size_t rows() const noexcept { return rows_; }

private:
    std::size_t width_;
    std::size_t rows_ = 0;
    std::string text_;
};

std::string sha256_hex(std::string_view bytes);

struct RunContext {
    std::string command_line;
    std::string subcommand;
    nlohmann::json config = nlohmann::json::object();
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

/// Writes `payload` to `out_path` (stdout when empty). With a path, a
/// `<out>.manifest.json` is written alongside, and `<out>.gp` when
/// `gnuplot_script` is nonempty.
void emit(const RunContext& context, const std::string& payload, const std::string& out_path,
          const std::string& gnuplot_script);

}  // namespace plike::cli
