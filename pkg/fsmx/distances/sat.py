from __future__ import absolute_import, division, print_function
from collections import OrderedDict
import itertools
from fsmx.fsmxutil import util


class SatFormula(object):
    """3-CNF formula over atoms 1..n.

    A literal is a nonzero int: +j for x_j, -j for its negation. Each
    clause holds exactly three literals, stored in atom order.

    Arguments:
        numVariables: n

        clauses: iterable of 3-literal iterables
    """

    def __init__(self, numVariables, clauses):
        if numVariables < 1:
            raise ValueError("A formula needs at least one variable")
        self.numVariables = int(numVariables)
        normalized = []
        for clause in clauses:
            clause = [int(x) for x in clause]
            if len(clause) != 3:
                raise ValueError("Clause "+str(clause)
                                 +" does not have exactly 3 literals")
            for literal in clause:
                if literal == 0 or abs(literal) > self.numVariables:
                    raise ValueError("Literal "+str(literal)
                                     +" outside atoms 1.."
                                     +str(self.numVariables))
            normalized.append(tuple(sorted(clause,
                                           key=lambda x: (abs(x), x))))
        if len(normalized) == 0:
            raise ValueError("A formula needs at least one clause")
        self.clauses = tuple(normalized)

    @property
    def n(self):
        return self.numVariables

    @property
    def k(self):
        return len(self.clauses)

    def __eq__(self, other):
        return (isinstance(other, SatFormula)
                and self.numVariables == other.numVariables
                and self.clauses == other.clauses)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        return ("SatFormula(n="+str(self.n)+", clauses="
                +str([list(x) for x in self.clauses])+")")

    @staticmethod
    def literalSatisfied(literal, bit):
        return (literal > 0) == bool(bit)

    def clauseSatisfied(self, clause, bits):
        return any(self.literalSatisfied(x, bits[abs(x) - 1])
                   for x in clause)

    def _bits(self, w):
        if isinstance(w, str):
            bits = []
            for symbol in w:
                if symbol not in "01":
                    raise util.RejectedInputError(
                        "Assignments are binary strings, got "+repr(symbol))
                bits.append(symbol == "1")
            return bits
        return [bool(int(x)) for x in w]

    def countSatisfied(self, w):
        """N_w: clauses satisfied by the assignment x_j = w_j; only the
        first n symbols of ``w`` are read.
        """
        bits = self._bits(w)
        if len(bits) < self.n:
            raise ValueError("Assignment shorter than "+str(self.n)+" bits")
        return sum(1 for clause in self.clauses
                   if self.clauseSatisfied(clause, bits))

    def isSatisfiable(self):
        return any(self.countSatisfied(bits) == self.k for bits
                   in itertools.product([0, 1], repeat=self.n))

    def getJsonableObject(self):
        return OrderedDict([("n", self.n),
                            ("clauses", [list(x) for x in self.clauses])])

    @classmethod
    def fromJsonable(cls, obj):
        return cls(obj["n"], obj["clauses"])


def read_dimacs(fileName):
    """Read a 3-CNF DIMACS file (``c`` comments, one ``p cnf n k``
    header, clauses terminated by 0).
    """
    numVariables = [None]
    declaredClauses = [None]
    literals = []
    clauses = []

    def action(inp, line_number):
        if len(inp) == 0 or inp[0] in ("c", "%"):
            return
        if inp[0] == "p":
            if len(inp) != 4 or inp[1] != "cnf":
                raise ValueError("Bad header on line "+str(line_number)
                                 +" of "+fileName)
            numVariables[0] = int(inp[2])
            declaredClauses[0] = int(inp[3])
            return
        for token in inp:
            literal = int(token)
            if literal == 0:
                clauses.append(list(literals))
                del literals[:]
            else:
                literals.append(literal)

    util.perform_action_on_each_line_of_file(
        file_handle=util.get_file_handle(fileName),
        action=action,
        transformation=lambda x: util.trim_newline(x).split())
    if numVariables[0] is None:
        raise ValueError("No 'p cnf' header in "+fileName)
    if len(literals) > 0:
        clauses.append(list(literals))
    if declaredClauses[0] != len(clauses):
        util.printWarning(fileName+" declares "+str(declaredClauses[0])
                          +" clauses but holds "+str(len(clauses)))
    return SatFormula(numVariables[0], clauses)


def write_dimacs(fileName, formula):
    ofh = util.get_file_handle(fileName, 'w')
    ofh.write("p cnf "+str(formula.n)+" "+str(formula.k)+"\n")
    for clause in formula.clauses:
        ofh.write(" ".join(str(x) for x in clause)+" 0\n")
    ofh.close()


def random_3cnf(numVariables, numClauses, randomState=None):
    """k clauses of three distinct atoms with random polarities.

    When n < 3 atoms repeat within a clause.
    """
    if randomState is None:
        from fsmx import random as randomState
    clauses = []
    for i in range(numClauses):
        atoms = randomState.choice(numVariables, size=3,
                                   replace=numVariables < 3) + 1
        signs = randomState.randint(2, size=3)*2 - 1
        clauses.append([int(a*s) for (a, s) in zip(atoms, signs)])
    return SatFormula(numVariables, clauses)
