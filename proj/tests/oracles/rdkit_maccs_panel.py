"""Reference structural-key bits for the fingerprint oracle panel.

Computed with RDKit (independent toolkit) and frozen into
tests/panels.h. Re-run with
`python3 tests/oracles/rdkit_maccs_panel.py`.
"""
from rdkit import Chem
from rdkit.Chem import MACCSkeys

PANEL = [
    "C", "O", "CCO", "CCCC", "CC(C)=O", "CC(=O)O", "c1ccccc1", "Cc1ccccc1",
    "Oc1ccccc1", "c1ccncc1", "Clc1ccccc1", "C1CCOC1", "CN(C)C=O", "CS(C)=O",
    "CC#N", "CCOC(C)=O", "CN1CCCC1=O", "[O-][N+](=O)c1ccccc1", "Nc1ccccc1",
    "O=C1CCCCCN1", "OCCO", "c1ccsc1", "C=Cc1ccccc1", "CNC(C)=O",
    "c1ccc2ccccc2c1", "CC(C)(C)c1ccc(O)cc1", "C1CCCCCCCCC1",
    "OC(=O)CCCCC(=O)O", "CC(C)CC(C)(C)CC(C)C(=O)OCCN", "C1CC1N",
    "O=C(O)c1ccccc1C(=O)O", "c1ccc(cc1)-c1ccccc1", "CCN(CC)CC.Cl",
    "ClC(Cl)Cl", "FC(F)(F)C(F)(F)F", "C1CCC2CCCCC2C1", "CC(=O)Nc1ccc(O)cc1",
    "CCCCCCCCCCCCCCCCO", "C[Si](C)(C)O[Si](C)(C)C", "O=S(=O)(O)c1ccccc1",
]

for smi in PANEL:
    fp = MACCSkeys.GenMACCSKeys(Chem.MolFromSmiles(smi))
    bits = ", ".join(str(b) for b in fp.GetOnBits())
    print(f'{{"{smi}", {{{bits}}}}},')
