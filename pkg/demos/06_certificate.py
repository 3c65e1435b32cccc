"""No-stress-tensor certificates and their independent replay.

For n >= 2 level two is null.  For n = 1 the only candidate field breaks a
Virasoro relation by a fixed amount.  For n = 0 nothing obstructs.
"""
import json

from derivcft.certify import CertificateMismatch, certify, check_certificate, verify_certificate

for n in range(4):
    cert = certify(n)
    print(f"n={n}: {cert.variant}, d2={cert.d2}, replay ok={verify_certificate(cert)}")

w = certify(1).witness
print("n=1 relation:", w["relation"], " gap:", w["gap"])

bad = json.loads(certify(1).to_json())
bad["witness"]["gap"] = "47"
try:
    check_certificate(bad)
except CertificateMismatch as exc:
    print("tampered certificate rejected at", exc.field_name)
