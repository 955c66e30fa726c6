#ifndef ENDOCHAIN_IO_HPP
#define ENDOCHAIN_IO_HPP

/* JSON ingestion of ring, module and module-list files, and JSON rendering
 * of reports. Malformed input raises SchemaError; unreadable files IoError. */

#include <string>
#include <vector>

#include "json.hpp"

#include "endochain/chain.hpp"
#include "endochain/endo.hpp"
#include "endochain/resolver.hpp"

namespace endochain {

using Json = nlohmann::json;

Json read_json_file(const std::string& path);

/* {"kind":"rational"} or {"kind":"prime","p":p}; rational when absent. */
FieldSpec field_from_json(const Json& j);
Json field_to_json(const FieldSpec& f);

/* {"field":..,"branches":b,"generators":[[[[exp,"coeff"],..] per branch],..]}
 * or {"semigroup":[a_1,..]}. Other keys are ignored. */
template <class S> RingPtr<S> ring_from_json(const Json& j, const BuildOptions& opts = {});
/* Canonical generators in the ring-file format; ring_from_json reads it back. */
template <class S> Json ring_to_json(const CurveRing<S>& r);
Json report_to_json(const RingReport& r);

template <class S> LaurentPoly<S> poly_from_json(const Json& j, const FieldSpec& f);
template <class S> Json poly_to_json(const LaurentPoly<S>& p);

/* {"ambient_rank":[r_i],"generators":[[poly per slot],..],"tail":[w per slot]}.
 * An optional "slot_branch" list replaces the branch-major slot layout. */
template <class S> Lattice<S> module_from_json(const RingPtr<S>& r, const Json& j);
/* Window vectors and tail, with slot_branch; module_from_json reads it back. */
template <class S> Json module_to_json(const Lattice<S>& l);

/* {"modules":[entry,..]} with entries either module objects or
 * {"overring": ring object}, each with an optional "label". */
template <class S>
std::vector<Lattice<S>> module_list_from_json(const RingPtr<S>& r, const Json& j, std::vector<std::string>* labels,
                                              const BuildOptions& opts = {});

template <class S> Json chain_to_json(const ChainTree<S>& tree, const EFamily<S>& fam, bool normalization_ok);
template <class S> Json matrix_to_json(const PolyMatrix<S>& m);
template <class S> Json resolution_to_json(const Resolution<S>& res, const EFamily<S>& fam);
Json gldim_to_json(const GldimReport& r);
Json error_to_json(const EngineError& e);

} // namespace endochain

#endif
