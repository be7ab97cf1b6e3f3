#pragma once

#include <stdexcept>
#include <string>

namespace gapforge {

// Base of every error thrown by the library. `category()` drives the CLI exit
// code: validation problems exit with 2, budget and overflow problems with 3.
class Error : public std::runtime_error {
 public:
  enum class Category { Validation, Budget, Internal };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

 private:
  Category category_;
};

#define GAPFORGE_ERROR(Name, Cat)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what)                          \
        : Error(Category::Cat, std::string(#Name ": ") + what) {}   \
  };

GAPFORGE_ERROR(ValidationError, Validation)
GAPFORGE_ERROR(UndefinedIterate, Validation)
GAPFORGE_ERROR(NonMonotone, Validation)
GAPFORGE_ERROR(OrderingViolated, Validation)
GAPFORGE_ERROR(NoPlacement, Validation)
GAPFORGE_ERROR(NoAllowedClass, Validation)
GAPFORGE_ERROR(UnclassifiableForm, Validation)
GAPFORGE_ERROR(IoFailure, Validation)
GAPFORGE_ERROR(RangeTooLarge, Budget)
GAPFORGE_ERROR(BudgetExceeded, Budget)
GAPFORGE_ERROR(FactorBudgetExceeded, Budget)
GAPFORGE_ERROR(Overflow, Budget)
// A tuple element lost coprimality with W. The construction never produces
// this; seeing it means a bug upstream.
GAPFORGE_ERROR(HViolation, Internal)

#undef GAPFORGE_ERROR

}  // namespace gapforge
