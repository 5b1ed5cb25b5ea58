#pragma once

#include <memory>
#include <string>
#include <vector>

namespace coarsex {

// Finite group given by its full multiplication table; elements are indices.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table,
              std::string label = "");

  int order() const { return static_cast<int>(names_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  int identity() const { return identity_; }
  int conj(int g, int h) const { return mul(mul(g, h), inv(g)); }  // g h g^-1
  const std::string& name(int a) const { return names_[a]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  const std::string& label() const { return label_; }
  int index_of(const std::string& name) const;
  bool same_as(const FiniteGroup& other) const;

  std::vector<int> generated(const std::vector<int>& gens) const;
  bool is_subgroup(const std::vector<int>& elems) const;
  std::vector<int> normalizer(const std::vector<int>& subgroup) const;
  std::vector<int> conjugate_subset(int g, const std::vector<int>& subset) const;
  std::vector<std::vector<int>> subgroups() const;
  std::vector<std::vector<int>> subgroup_classes() const;  // one per conjugacy class

  static FiniteGroup trivial();
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric3();
  static FiniteGroup by_name(const std::string& name);  // trivial, Z<n>, S3

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::string label_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr make_group(FiniteGroup g);
GroupPtr group_by_name(const std::string& name);

class GroupHom {
 public:
  GroupHom(GroupPtr source, GroupPtr target, std::vector<int> map);

  const GroupPtr& source() const { return source_; }
  const GroupPtr& target() const { return target_; }
  int operator()(int h) const { return map_[h]; }
  const std::vector<int>& map() const { return map_; }
  const std::vector<int>& kernel() const { return kernel_; }
  const std::vector<int>& image() const { return image_; }
  bool injective() const { return kernel_.size() == 1; }

  static GroupHom identity(const GroupPtr& g);

 private:
  GroupPtr source_, target_;
  std::vector<int> map_;
  std::vector<int> kernel_, image_;
};

GroupHom compose(const GroupHom& outer, const GroupHom& inner);

// A subgroup realized as a group of its own, with elements listed in parent order.
struct Subgroup {
  GroupPtr group;
  GroupHom inclusion;
};
Subgroup make_subgroup(const GroupPtr& parent, std::vector<int> elems);

// Quotient by a normal subgroup; cosets ordered by their least element.
struct Quotient {
  GroupPtr group;
  GroupHom projection;
  std::vector<int> representative;  // least element of each coset
};
Quotient make_quotient(const GroupPtr& parent, const std::vector<int>& normal);

// Element (a, b) has index a * |second| + b.
GroupPtr direct_product(const GroupPtr& first, const GroupPtr& second);

}  // namespace coarsex
