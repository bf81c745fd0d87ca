#include "mtlab/errors.hpp"

namespace mtlab {

void fail_domain(const std::string& what) { throw DomainError(what); }
void fail_range(const std::string& what) { throw RangeError(what); }
void fail_input(const std::string& what) { throw InputError(what); }
void fail_precondition(const std::string& what) { throw PreconditionError(what); }

}  // namespace mtlab
