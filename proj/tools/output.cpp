#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "plike/csv.hpp"
#include "plike/errors.hpp"

namespace plike::cli {

CsvBuilder::CsvBuilder(std::vector<std::string> columns) : width_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text_ += ',';
        text_ += columns[i];
    }
    text_ += '\n';
}

void CsvBuilder::row(std::initializer_list<double> values) {
    if (values.size() != width_) throw std::logic_error("CSV row width mismatch");
    bool first = true;
    for (double v : values) {
        if (!first) text_ += ',';
        text_ += csv::format_number(v);
        first = false;
    }
    text_ += '\n';
    ++rows_;
}

void CsvBuilder::row_mixed(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::logic_error("CSV row width mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_ += ',';
        text_ += fields[i];
    }
    text_ += '\n';
    ++rows_;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

namespace {

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataFormatError("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataFormatError("failed writing '" + path + "'");
}

}  // namespace

void emit(const RunContext& context, const std::string& payload, const std::string& out_path,
          const std::string& gnuplot_script) {
    if (out_path.empty()) {
        std::cout.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        std::cout.flush();
        return;
    }
    write_file(out_path, payload);

    nlohmann::json outputs = nlohmann::json::array();
    outputs.push_back({{"path", out_path}, {"sha256", sha256_hex(payload)}, {"bytes", payload.size()}});
    if (!gnuplot_script.empty()) {
        const std::string script_path = out_path + ".gp";
        write_file(script_path, gnuplot_script);
        outputs.push_back(
            {{"path", script_path}, {"sha256", sha256_hex(gnuplot_script)}, {"bytes", gnuplot_script.size()}});
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - context.started).count();
    const nlohmann::json manifest = {
        {"tool", "plike"},
        {"version", PLIKE_VERSION},
        {"command", context.subcommand},
        {"command_line", context.command_line},
        {"config", context.config},
        {"wall_time_seconds", wall},
        {"outputs", outputs},
    };
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace plike::cli
