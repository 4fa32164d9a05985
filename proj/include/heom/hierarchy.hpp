#ifndef heom_hierarchy_hpp
#define heom_hierarchy_hpp

#include <cstddef>
#include <vector>

namespace heom {

// Multi-index n = (n_1, ..., n_N) labelling one auxiliary density operator.
struct HierarchyIndex {
	std::vector<int> n;

	int depth() const noexcept;
	bool operator==(const HierarchyIndex&) const = default;
};

/// All multi-indices over n_sites components with component sum <= depth,
/// ordered by total degree, and within a degree by descending n_1, then n_2, ...
/// For (2, 3): (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (3,0) (2,1) (1,2) (0,3).
std::vector<HierarchyIndex> enumerate_hierarchy(std::size_t n_sites, int depth);

// C(n + k, k) without overflow for the sizes used here.
std::size_t hierarchy_size(std::size_t n_sites, int depth);

/// Enumerated hierarchy plus neighbour tables for O(1) coupling lookups.
class Hierarchy {
public:
	static constexpr std::ptrdiff_t none = -1;

	Hierarchy(std::size_t n_sites, int depth);

	std::size_t n_sites() const noexcept { return n_sites_; }
	int depth() const noexcept { return depth_; }
	std::size_t size() const noexcept { return indices_.size(); }
	const std::vector<HierarchyIndex>& indices() const noexcept { return indices_; }
	const HierarchyIndex& index(std::size_t pos) const { return indices_[pos]; }

	// Position of n_{j+}, or none when it lies beyond the truncation depth.
	std::ptrdiff_t raised(std::size_t pos, std::size_t site) const noexcept { return plus_[pos * n_sites_ + site]; }
	// Position of n_{j-}, or none when n_j == 0.
	std::ptrdiff_t lowered(std::size_t pos, std::size_t site) const noexcept { return minus_[pos * n_sites_ + site]; }

	// Position of an arbitrary index, or none if it is not part of the hierarchy.
	std::ptrdiff_t find(const HierarchyIndex& idx) const;

private:
	std::size_t n_sites_;
	int depth_;
	std::vector<HierarchyIndex> indices_;
	std::vector<std::ptrdiff_t> plus_;
	std::vector<std::ptrdiff_t> minus_;
};

} // namespace heom

#endif // heom_hierarchy_hpp
