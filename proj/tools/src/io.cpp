#include "refagree/cli/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "refagree/errors.hpp"

namespace refagree::cli {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open input file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0F]);
  }
  return out;
}

AtomicOutputs::~AtomicOutputs() {
  if (committed_) return;
  for (const auto& [tmp, dest] : staged_) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
  }
}

void AtomicOutputs::add(std::filesystem::path destination, std::string contents) {
  auto tmp = destination;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(staged_.size());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw DataError("failed writing " + tmp.string());
    }
  }
  staged_.emplace_back(std::move(tmp), std::move(destination));
}

void AtomicOutputs::commit() {
  for (const auto& [tmp, dest] : staged_) {
    std::error_code ec;
    std::filesystem::rename(tmp, dest, ec);
    if (ec) throw DataError("cannot move output into place at " + dest.string() + ": " + ec.message());
  }
  committed_ = true;
}

}  // namespace refagree::cli
