#ifndef heom_checksum_hpp
#define heom_checksum_hpp

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace heom {

// Incremental SHA-256.
class Sha256 {
public:
	Sha256();
	~Sha256();
	Sha256(const Sha256&) = delete;
	Sha256& operator=(const Sha256&) = delete;

	void update(std::span<const std::byte> bytes);
	void update(std::string_view text);
	// Lowercase hex; the object cannot be updated afterwards.
	std::string hex_digest();

private:
	struct impl;
	std::unique_ptr<impl> impl_;
};

// SHA-256 of the concatenated contents of the given files, streamed.
std::string sha256_files(const std::vector<std::filesystem::path>& files);

} // namespace heom

#endif // heom_checksum_hpp
