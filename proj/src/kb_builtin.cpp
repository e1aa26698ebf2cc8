#include "plancog/kb.hpp"

namespace plancog {

namespace {

constexpr std::string_view kBuiltin = R"KB(# Built-in plan library.
#
# Variable plans bind to one variable: `init` and `update` slots match its
# definitions outside and inside loops, `context` the loop it lives in.
# Control and algorithm plans bind to one loop; slots with a `uses` link are
# filled by variable-plan instances.

schema New_Value_Variable kind variable
  desc "holds the latest value handed over by some generator"
  slot name mandatory
    filler "<v>" proto
  slot type
    filler "integer" proto
    filler "real"
  slot context
    filler "iteration" proto

schema Read_Variable kind variable
  desc "receives each value read from the input"
  slot name mandatory
    filler "~num" proto
    filler "~val"
    filler "~item"
    filler "~key"
    filler "~input"
    filler "~data"
    filler "X"
    filler "<v>"
  slot type
    filler "integer" proto
    filler "real"
  slot init mandatory
    filler "READLN(<v>)" proto
  slot context
    filler "iteration" proto
  kindof New_Value_Variable

schema Counter_Variable kind variable
  desc "tallies how many times an action happens"
  slot name mandatory
    filler "I" proto
    filler "J"
    filler "K"
    filler "~count"
    filler "~cnt"
    filler "~index"
    filler "<v>"
  slot type
    filler "integer" proto
  slot init mandatory
    filler "<v>:=0" proto
    filler "<v>:=1"
    filler "<v>:=<int>"
  slot update mandatory
    filler "<v>:=<v>+1" proto
  slot context
    filler "iteration" proto
  kindof New_Value_Variable

schema Running_Total_Variable kind variable
  desc "accumulates a value one step at a time"
  slot name mandatory
    filler "~sum" proto
    filler "~total"
    filler "~tot"
    filler "~acc"
    filler "<v>"
  slot type
    filler "integer" proto
    filler "real"
  slot init mandatory
    filler "<v>:=0" proto
    filler "<v>:=<int>"
  slot update mandatory
    filler "<v>:=<v>+<w>" proto
    filler "<v>:=<w>+<v>"
  slot context
    filler "iteration" proto

schema Flag_Variable kind variable
  desc "signals that some condition has come about"
  slot name mandatory
    filler "~done" proto
    filler "~flag"
    filler "~found"
    filler "~finish"
    filler "~stop"
    filler "~end"
    filler "<v>"
  slot type
    filler "boolean" proto
  slot init mandatory
    filler "<v>:=FALSE" proto
    filler "<v>:=TRUE"
  slot update mandatory
    filler "<v>:=TRUE" proto
    filler "<v>:=FALSE"
  slot context mandatory
    filler "while" proto
    filler "repeat"

schema Average_Variable kind variable
  desc "divides an accumulated total by a count"
  slot name mandatory
    filler "~aver" proto
    filler "~avg"
    filler "~mean"
    filler "<v>"
  slot type
    filler "real" proto
  slot init mandatory
    filler "<v>:=<w>/<x>" proto
    filler "<v>:=<w> DIV <x>"

schema Output_Variable kind variable
  desc "writes a computed result"
  slot name mandatory
    filler "<v>" proto
  slot output mandatory
    filler "WRITELN(<v>)" proto

schema Running_Total_Loop kind control
  desc "builds up a running total inside a loop, possibly also counting the iterations"
  slot Counter
  slot Running_total mandatory
  slot New_Value mandatory
  slot setup
    filler "<Running_total>:=0" proto
    filler "<Running_total>:=<int>"
  slot body mandatory
    filler "iteration" proto
  uses Counter_Variable as Counter
  uses Running_Total_Variable as Running_total
  uses New_Value_Variable as New_Value

schema Total_Controlled_Running_Total_Loop kind control
  desc "running-total loop whose exit test inspects the total"
  slot Counter
  slot Running_total mandatory
  slot New_Value mandatory
  slot setup
    filler "<Running_total>:=0" proto
    filler "<Running_total>:=<int>"
  slot body mandatory
    filler "iteration" proto
  slot test mandatory
    filler "<Running_total>><int>" proto
    filler "<Running_total>>=<int>"
    filler "<Running_total><<int>"
    filler "<Running_total><=<int>"
  kindof Running_Total_Loop
  uses Counter_Variable as Counter
  uses Running_Total_Variable as Running_total
  uses New_Value_Variable as New_Value

schema Counter_Controlled_Running_Total_Loop kind control
  desc "running-total loop whose exit test inspects the counter"
  slot Counter mandatory
  slot Running_total mandatory
  slot New_Value mandatory
  slot setup
    filler "<Running_total>:=0" proto
    filler "<Running_total>:=<int>"
  slot body mandatory
    filler "iteration" proto
  slot test mandatory
    filler "<Counter>=<int>" proto
    filler "<Counter>><int>"
    filler "<Counter>>=<int>"
    filler "<Counter><<int>"
    filler "<Counter><=<int>"
    filler "<Counter>=<w>"
    filler "<Counter>><w>"
    filler "<Counter>>=<w>"
    filler "<Counter><<w>"
    filler "<Counter><=<w>"
  slot loop
  kindof Running_Total_Loop
  uses Counter_Variable as Counter
  uses Running_Total_Variable as Running_total
  uses New_Value_Variable as New_Value
  uses For_Loop as loop

schema New_Value_Controlled_Running_Total_Loop kind control
  desc "running-total loop whose exit test inspects the newly produced value"
  slot Counter
  slot Running_total mandatory
  slot New_Value mandatory
  slot setup
    filler "<Running_total>:=0" proto
    filler "<Running_total>:=<int>"
  slot body mandatory
    filler "iteration" proto
  slot test mandatory
    filler "<New_Value>=<int>" proto
    filler "<New_Value><><int>"
  kindof Running_Total_Loop
  uses Counter_Variable as Counter
  uses Running_Total_Variable as Running_total
  uses New_Value_Variable as New_Value

schema For_Loop kind implementation
  desc "Pascal FOR statement stepping a control variable"
  slot loop mandatory
    filler "for" proto

schema Linear_Search kind algorithm
  desc "examines items one after another until the wanted one turns up"
  slot counter mandatory
  slot loop mandatory
    filler "while" proto
    filler "repeat"
  slot test mandatory
    filler "<a><><b>" proto
    filler "<a>=<b>"
  slot counter-update
    filler "<counter>:=<counter>+1" proto
  uses Counter_Variable as counter

schema Stock_Management kind problem
  desc "task domain: keeping track of goods held in stock"
  slot data-structure
    filler "record(name of file, descriptor of file)" proto
  slot functions
    filler "allocation" proto
    filler "destruction"
    filler "search"

discourse D1 check name-reflects-function "a variable's name should tell what the variable is for"
discourse D2 check no-double-duty "one statement should not quietly serve two purposes"
discourse D3 check no-unused-plan-part "every part of a plan should be put to use"

rule R1 data: if name~"I", type=integer then activate Counter_Variable, bind context="iteration"
rule R2 data: if init~"I:=1" then activate Counter_Variable, bind update="I:=I+1"
rule R3 data: if schema=Counter_Variable, loopform~"while <a><><b>" then activate Linear_Search, bind counter-update="I:=I+1"
rule R4 data: if update~"<v>:=<v>+1" then activate Counter_Variable
rule R5 data: if update~"<v>:=<v>+<w>" then activate Running_Total_Variable
rule R6 data: if init~"READLN(<v>)" then activate Read_Variable
rule R7 data: if type=boolean, update~"<v>:=TRUE" then activate Flag_Variable, bind context="while"
rule R8 data: if schema=Running_Total_Variable then activate Running_Total_Loop
rule R9 data: if init~"<v>:=<w>/<x>" then activate Average_Variable
rule R10 data: if schema=Average_Variable then activate Output_Variable
rule R11 data: if loop=for then activate For_Loop
rule R12 data: if comment~"count" then activate Counter_Variable
rule R13 data: if comment~"total" then activate Running_Total_Variable
rule R14 concept: if schema=Running_Total_Loop, loop=for then activate Counter_Controlled_Running_Total_Loop
)KB";

}  // namespace

std::string_view builtin_kb_text() { return kBuiltin; }

const KnowledgeBase& builtin_kb() {
  static const KnowledgeBase kb = load_kb(kBuiltin);
  return kb;
}

}  // namespace plancog
