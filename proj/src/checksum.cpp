#include "heom/checksum.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace heom {

struct Sha256::impl {
	EVP_MD_CTX* ctx = nullptr;
	bool finished = false;
};

Sha256::Sha256() : impl_(std::make_unique<impl>())
{
	impl_->ctx = EVP_MD_CTX_new();
	if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1)
		throw std::runtime_error("cannot initialise SHA-256");
}

Sha256::~Sha256()
{
	EVP_MD_CTX_free(impl_->ctx);
}

void Sha256::update(std::span<const std::byte> bytes)
{
	if (impl_->finished)
		throw std::logic_error("SHA-256 already finalised");
	if (EVP_DigestUpdate(impl_->ctx, bytes.data(), bytes.size()) != 1)
		throw std::runtime_error("SHA-256 update failed");
}

void Sha256::update(std::string_view text)
{
	update(std::as_bytes(std::span(text.data(), text.size())));
}

std::string Sha256::hex_digest()
{
	std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
	unsigned int length = 0;
	if (impl_->finished || EVP_DigestFinal_ex(impl_->ctx, digest.data(), &length) != 1)
		throw std::runtime_error("SHA-256 finalisation failed");
	impl_->finished = true;

	static constexpr char hex[] = "0123456789abcdef";
	std::string out;
	out.reserve(2 * length);
	for (unsigned int k = 0; k < length; ++k) {
		out.push_back(hex[digest[k] >> 4]);
		out.push_back(hex[digest[k] & 0xf]);
	}
	return out;
}

std::string sha256_files(const std::vector<std::filesystem::path>& files)
{
	Sha256 hash;
	std::vector<char> buffer(1 << 20);
	for (const auto& file : files) {
		std::ifstream in(file, std::ios::binary);
		if (!in)
			throw std::runtime_error("cannot open " + file.string() + " for hashing");
		while (in) {
			in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
			const auto got = static_cast<std::size_t>(in.gcount());
			if (got > 0)
				hash.update(std::as_bytes(std::span(buffer.data(), got)));
		}
	}
	return hash.hex_digest();
}

} // namespace heom
