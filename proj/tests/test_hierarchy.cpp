#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "heom/errors.hpp"
#include "heom/hierarchy.hpp"

using namespace heom;

namespace {

// Brute force: count every tuple in [0, K]^N whose sum is <= K.
std::size_t brute_force_count(std::size_t n, int k)
{
	std::vector<int> t(n, 0);
	std::size_t count = 0;
	while (true) {
		int sum = 0;
		for (int x : t)
			sum += x;
		if (sum <= k)
			++count;
		std::size_t pos = 0;
		while (pos < n && t[pos] == k)
			t[pos++] = 0;
		if (pos == n)
			return count;
		++t[pos];
	}
}

std::vector<std::vector<int>> raw(const std::vector<HierarchyIndex>& v)
{
	std::vector<std::vector<int>> out;
	for (const auto& i : v)
		out.push_back(i.n);
	return out;
}

} // namespace

TEST_CASE("two sites, depth three")
{
	const auto h = enumerate_hierarchy(2, 3);
	const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
	CHECK(raw(h) == expected);
}

TEST_CASE("small cases")
{
	CHECK(enumerate_hierarchy(4, 3).size() == 35);
	const auto single = enumerate_hierarchy(1, 0);
	REQUIRE(single.size() == 1);
	CHECK(single[0].n == std::vector<int>{0});
	CHECK(raw(enumerate_hierarchy(3, 1)) == std::vector<std::vector<int>>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
	CHECK_THROWS_AS(enumerate_hierarchy(0, 2), invalid_input);
	CHECK_THROWS_AS(enumerate_hierarchy(2, -1), invalid_input);
}

TEST_CASE("counts match stars and bars and brute force")
{
	for (std::size_t n = 1; n <= 6; ++n)
		for (int k = 0; k <= 5; ++k) {
			CAPTURE(n);
			CAPTURE(k);
			const auto h = enumerate_hierarchy(n, k);
			CHECK(h.size() == brute_force_count(n, k));
			CHECK(h.size() == hierarchy_size(n, k));

			std::set<std::vector<int>> unique;
			int previous_depth = 0;
			for (const auto& idx : h) {
				CHECK(idx.depth() <= k);
				CHECK(idx.depth() >= previous_depth);
				previous_depth = idx.depth();
				unique.insert(idx.n);
			}
			CHECK(unique.size() == h.size());
		}
}

TEST_CASE("neighbour tables")
{
	const Hierarchy h(3, 3);
	CHECK(h.size() == 20);
	for (std::size_t p = 0; p < h.size(); ++p) {
		const auto& n = h.index(p).n;
		for (std::size_t j = 0; j < 3; ++j) {
			const auto up = h.raised(p, j);
			if (h.index(p).depth() < 3) {
				REQUIRE(up != Hierarchy::none);
				auto expected = n;
				++expected[j];
				CHECK(h.index(static_cast<std::size_t>(up)).n == expected);
			} else {
				CHECK(up == Hierarchy::none);
			}

			const auto down = h.lowered(p, j);
			if (n[j] == 0) {
				CHECK(down == Hierarchy::none);
			} else {
				REQUIRE(down != Hierarchy::none);
				auto expected = n;
				--expected[j];
				CHECK(h.index(static_cast<std::size_t>(down)).n == expected);
			}
		}
		CHECK(h.find(h.index(p)) == static_cast<std::ptrdiff_t>(p));
	}
	CHECK(h.find(HierarchyIndex{{4, 0, 0}}) == Hierarchy::none);
	CHECK(h.find(HierarchyIndex{{0, 0}}) == Hierarchy::none);
}
