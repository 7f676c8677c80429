// Hand-written documents shared by several test binaries.
#pragma once

namespace fixture {

// A proof for the Pythagorean theorem, saved as page "pyth-proof".
inline constexpr const char* kPythProof = R"(<omdoc>
  <theory xml:id="geometry">
    <proof id="pyth-proof" for="pythagoras">
      <CMP>Consider the squares over the legs of a right triangle.</CMP>
    </proof>
  </theory>
</omdoc>
)";

inline constexpr const char* kPythagoras = R"(<omdoc>
  <theory xml:id="geometry">
    <assertion id="pythagoras">
      <CMP>In a right triangle the square of the hypotenuse equals the sum of the squares of the legs.</CMP>
    </assertion>
  </theory>
</omdoc>
)";

// Symbols, notations and an example whose formula is times(plus(1, 2), 3).
inline constexpr const char* kArith = R"(<omdoc>
  <theory xml:id="arith">
    <metadata>
      <dc-title>Elementary arithmetic</dc-title>
      <dc-creator>Wiki maintainers</dc-creator>
    </metadata>
    <symbol id="plus">
      <CMP>Addition.</CMP>
    </symbol>
    <symbol id="times">
      <CMP>Multiplication.</CMP>
    </symbol>
    <definition id="plus-def" for="arith/plus">
      <CMP>Iterated successor.</CMP>
    </definition>
    <definition id="times-def" for="arith/times">
      <CMP>Iterated addition.</CMP>
    </definition>
    <notation for="arith#plus" fixity="infix" operator="+" precedence="10"/>
    <notation for="arith#times" fixity="infix" operator="·" precedence="20"/>
    <example id="distrib" for="arith/times">
      <CMP>A product of a sum, see <link to="arith/plus">addition</link>.</CMP>
      <FMP>
        <OMA>
          <OMS cd="arith" name="times"/>
          <OMA>
            <OMS cd="arith" name="plus"/>
            <OMI>1</OMI>
            <OMI>2</OMI>
          </OMA>
          <OMI>3</OMI>
        </OMA>
      </FMP>
    </example>
  </theory>
</omdoc>
)";

// Three theories refactored along an import chain.
inline constexpr const char* kAlgebra = R"(<omdoc>
  <theory xml:id="group">
    <imports from="monoid"/>
    <axiom id="inverse">
      <CMP>Every element has an inverse.</CMP>
    </axiom>
  </theory>
  <theory xml:id="semigroup">
    <axiom id="assoc">
      <CMP>The operation is associative.</CMP>
    </axiom>
  </theory>
  <theory xml:id="monoid">
    <imports from="semigroup"/>
    <axiom id="unit">
      <CMP>There is a neutral element.</CMP>
    </axiom>
  </theory>
</omdoc>
)";

// One unproved assertion (sets/choice), one symbol without definition
// (sets/member), one used symbol without notation (sets#union, which is
// defined) and one import of a missing theory (logic).
inline constexpr const char* kWorkQueue = R"(<omdoc>
  <theory xml:id="sets">
    <imports from="logic"/>
    <symbol id="member"/>
    <symbol id="union"/>
    <symbol id="empty"/>
    <definition id="union-def" for="sets/union">
      <FMP>
        <OMA>
          <OMS cd="sets" name="union"/>
          <OMV name="A"/>
          <OMS cd="sets" name="empty"/>
        </OMA>
      </FMP>
    </definition>
    <definition id="empty-def" for="sets/empty"/>
    <notation for="sets#empty" fixity="prefix" operator="∅" precedence="0"/>
    <assertion id="choice">
      <CMP>Every family of non-empty sets has a choice function.</CMP>
    </assertion>
    <assertion id="extensionality">
      <CMP>Sets with the same elements are equal.</CMP>
    </assertion>
    <proof id="ext-proof" for="sets/extensionality">
      <CMP>By the axiom.</CMP>
    </proof>
  </theory>
</omdoc>
)";

}  // namespace fixture
