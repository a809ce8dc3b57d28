// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

#include "fav/casestudy.hpp"

#ifndef FAV_CASESTUDY_DIR
#define FAV_CASESTUDY_DIR "casestudy/email"
#endif

namespace fav {

std::vector<InteractionExpectation> expected_interactions() {
  return {
      {0, "Decrypt", "Forward", "Decrypt", "DecryptForwardSpec"},
      {1, "AddressBook", "Encrypt", "Encrypt", "EncryptKnownKeySpec"},
      {3, "Sign", "Verify", "Sign", "SignKeepSpec"},
      {4, "Sign", "Forward", "Sign", "SignAuthorSpec"},
      {6, "Encrypt", "Decrypt", "Encrypt", "EncryptStoreSpec"},
      {7, "Encrypt", "Verify", "Encrypt", "EncryptReadSpec"},
      {8, "Encrypt", "AutoRespond", "Encrypt", "EncryptReplySpec"},
      {9, "Encrypt", "Forward", "Encrypt", "EncryptSpec"},
      {11, "Decrypt", "AutoRespond", "Decrypt", "DecryptFirstSpec"},
      {27, "Verify", "Forward", "Verify", "VerifySpec"},
  };
}

std::filesystem::path bundled_email_manifest() {
  return std::filesystem::path(FAV_CASESTUDY_DIR) / "email.manifest";
}

}  // namespace fav
