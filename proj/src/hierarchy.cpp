#include "heom/hierarchy.hpp"

#include <map>
#include <numeric>

#include "heom/errors.hpp"

namespace heom {

int HierarchyIndex::depth() const noexcept
{
	return std::accumulate(n.begin(), n.end(), 0);
}

namespace {

// All compositions of `remaining` into the components [site, end), first component descending.
void append_degree(std::vector<int>& current, std::size_t site, int remaining, std::vector<HierarchyIndex>& out)
{
	if (site + 1 == current.size()) {
		current[site] = remaining;
		out.push_back({current});
		return;
	}
	for (int k = remaining; k >= 0; --k) {
		current[site] = k;
		append_degree(current, site + 1, remaining - k, out);
	}
	current[site] = 0;
}

} // namespace

std::vector<HierarchyIndex> enumerate_hierarchy(std::size_t n_sites, int depth)
{
	if (n_sites == 0)
		throw invalid_input("hierarchy needs at least one site");
	if (depth < 0)
		throw invalid_input("hierarchy depth must be non-negative");

	std::vector<HierarchyIndex> out;
	out.reserve(hierarchy_size(n_sites, depth));
	std::vector<int> current(n_sites, 0);
	for (int d = 0; d <= depth; ++d)
		append_degree(current, 0, d, out);
	return out;
}

std::size_t hierarchy_size(std::size_t n_sites, int depth)
{
	// C(n + k, k) built up as a running product; each partial product is itself a binomial.
	std::size_t c = 1;
	for (int i = 1; i <= depth; ++i)
		c = c * (n_sites + static_cast<std::size_t>(i)) / static_cast<std::size_t>(i);
	return c;
}

Hierarchy::Hierarchy(std::size_t n_sites, int depth)
	: n_sites_(n_sites), depth_(depth), indices_(enumerate_hierarchy(n_sites, depth))
{
	std::map<std::vector<int>, std::ptrdiff_t> position;
	for (std::size_t p = 0; p < indices_.size(); ++p)
		position.emplace(indices_[p].n, static_cast<std::ptrdiff_t>(p));

	plus_.assign(indices_.size() * n_sites_, none);
	minus_.assign(indices_.size() * n_sites_, none);
	for (std::size_t p = 0; p < indices_.size(); ++p) {
		auto n = indices_[p].n;
		for (std::size_t j = 0; j < n_sites_; ++j) {
			++n[j];
			if (auto it = position.find(n); it != position.end())
				plus_[p * n_sites_ + j] = it->second;
			n[j] -= 2;
			if (n[j] >= 0)
				minus_[p * n_sites_ + j] = position.at(n);
			++n[j];
		}
	}
}

std::ptrdiff_t Hierarchy::find(const HierarchyIndex& idx) const
{
	if (idx.n.size() != n_sites_)
		return none;
	for (std::size_t p = 0; p < indices_.size(); ++p)
		if (indices_[p] == idx)
			return static_cast<std::ptrdiff_t>(p);
	return none;
}

} // namespace heom
