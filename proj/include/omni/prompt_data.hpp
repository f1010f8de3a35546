#pragma once

// Generated by tools/embed_data.py from data/prompts. Do not edit.

namespace omni::prompt_data {

inline constexpr const char* crafter_moi = R"omni(%% user
You are a player in a game. You want to learn as many different skills as possible. You can do this task well: collect wood.
Suggest whether the given tasks are interesting: collect drink, collect wood, make stone sword, make wood pickaxe, place furnace.
collect drink: True
collect 2 drink: True
collect 3 drink: True
collect wood: False
collect 2 wood: False
collect 3 wood: False
make stone sword: True
make 2 stone sword: True
make 3 stone sword: True
make wood pickaxe: True
make 2 wood pickaxe: True
make 3 wood pickaxe: True
place furnace: True
place 2 furnace: True
place 3 furnace: True

You are a player in a game. You want to learn as many different skills as possible. You can do this task well: make 2 iron pickaxe.
Suggest whether the given tasks are interesting: collect coal, collect iron, make iron pickaxe, make iron sword, place table.
collect coal: True
collect 2 coal: True
collect 3 coal: True
collect iron: True
collect 2 iron: True
collect 3 iron: True
make iron pickaxe: False
make 2 iron pickaxe: False
make 3 iron pickaxe: False
make iron sword: True
make 2 iron sword: True
make 3 iron sword: True
place table: True
place 2 table: True
place 3 table: True

You are a player in a game. You want to learn as many different skills as possible. You can do this task well: place 3 stone.
Suggest whether the given tasks are interesting: collect diamond, collect stone, make stone pickaxe, make wood sword, place stone.
collect diamond: True
collect 2 diamond: True
collect 3 diamond: True
collect stone: True
collect 2 stone: True
collect 3 stone: True
make stone pickaxe: True
make 2 stone pickaxe: True
make 3 stone pickaxe: True
make wood sword: True
make 2 wood sword: True
make 3 wood sword: True
place stone: False
place 2 stone: False
place 3 stone: False

You are a player in a game. You want to learn as many different skills as possible. You can do these tasks well: {done_well}.
Suggest whether the given tasks are interesting: {candidates}.
)omni";

inline constexpr const char* crafter_moi_synonyms = R"omni(%% user
You are a player in a game. You want to learn as many different skills as possible. You can do this task well: collect wood.
Suggest whether the given tasks are interesting: collect drink, collect wood, make stone sword, make wood pickaxe, place furnace.
collect drink: True
collect 2 drink: True
collect 3 drink: True
collect wood: False
collect 2 wood: False
collect 3 wood: False
make stone sword: True
make 2 stone sword: True
make 3 stone sword: True
make wood pickaxe: True
make 2 wood pickaxe: True
make 3 wood pickaxe: True
place furnace: True
place 2 furnace: True
place 3 furnace: True

You are a player in a game. You want to learn as many different skills as possible. You can do this task well: make 2 iron pickaxe.
Suggest whether the given tasks are interesting: collect coal, collect iron, make iron pickaxe, make iron sword, place table.
collect coal: True
collect 2 coal: True
collect 3 coal: True
collect iron: True
collect 2 iron: True
collect 3 iron: True
make iron pickaxe: False
make 2 iron pickaxe: False
make 3 iron pickaxe: False
make iron sword: True
make 2 iron sword: True
make 3 iron sword: True
place table: True
place 2 table: True
place 3 table: True

You are a player in a game. You want to learn as many different skills as possible. You can do this task well: place 3 stone.
Suggest whether the given tasks are interesting: collect diamond, collect stone, make stone pickaxe, make wood sword, place stone.
collect diamond: True
collect 2 diamond: True
collect 3 diamond: True
collect stone: True
collect 2 stone: True
collect 3 stone: True
make stone pickaxe: True
make 2 stone pickaxe: True
make 3 stone pickaxe: True
make wood sword: True
make 2 wood sword: True
make 3 wood sword: True
place stone: False
place 2 stone: False
place 3 stone: False

The agent has no prior knowledge of language, so it treats tasks that use different words for the same action as completely different tasks.
You are a player in a game. You want to learn as many different skills as possible. You can do these tasks well: {done_well}.
Suggest whether the given tasks are interesting: {candidates}.
)omni";

inline constexpr const char* babyai_moi = R"omni(%% system
You are a helpful assistant that tells an AI agent the next tasks to do in this 2D grid environment. The ultimate goal that it would like your help with is to learn as many interestingly different skills as possible, meaning a wide diversity of different skills that would help it be ready to solve new skills someone might ask it to perform, or to transfer what it has learned in this environment to other environments.

The grid world has objects in six distinct colors – "red", "green", "blue", "purple", "yellow", and "grey" – and of four types – "key", "ball", "box", and "door". Each task is a sequence of instructions, connected using "then", specifying the order of instructions to follow. Instructions include interactions like going to objects, picking up items, opening doors (which requires the appropriately colored key if the door is locked), and putting objects next to another. Object placements are randomized.

I will give you the following information:
Tasks the agent currently do well: ...
Predict which of these tasks are interesting: ...

You must follow the following criteria:
1) You should act as a mentor and guide the AI agent to the next most interesting tasks.
2) Interesting tasks are roughly those that are sufficiently different from the ones that it can already do, and should be novel, diverse and at least worth learning.

You should only respond in the format as described below:
RESPONSE FORMAT:
Reasoning: Based on the information given, do reasoning about why each task is interesting or not.
Predictions: The list of predictions. For each line, put the task, then a colon, then True for interesting or False for boring.

Here are some example responses:
Tasks the agent currently do well: "open some door", "go to some object"
Predict which of these tasks are interesting: "pick up some object", "put some object next to some other object", "go to some object, then put some object next to some other object", "go to some object, then go to some object", "go to some object, then open some door", "open some door, then go to some object"
Reasoning: Tasks that are recombinations of "go to some object" or "open some door" are not interesting. The tasks that introduce something different from the tasks done well are "pick up some object", "put some object next to some other object", and "go to some object, then put some object next to some other object", having a new actions of picking up an object, or putting an object next to another.
Predictions:
"pick up some object": True
"put some object next to some other object": True
"go to some object, then put some object next to some other object": True
"go to some object, then go to some object": False
"go to some object, then open some door": False
"open some door, then go to some object": False

Tasks the agent currently do well: "go to some object, then open some door", "go to some object", "pick up some object"
Predict which of these tasks are interesting: "pick up some object", "go to some object, then open some door, then open some door", "pick up some object, then put some object next to some other object, then put some object next to some other object", "put some object next to some other object, then go to some object, then put some object next to some other object, then open some door, then open some door"
Reasoning: Tasks that are recombinations of "go to some object, then open some door", "go to some object", or "pick up some object" are not interesting. The tasks that introduce something different from the tasks done well are "pick up some object, then put some object next to some other object, then put some object next to some other object" and "put some object next to some other object, then go to some object, then put some object next to some other object, then open some door, then open some door", having a new action of putting some object next to another.
Predictions:
"pick up some object": False
"go to some object, then open some door, then open some door": False
"pick up some object, then put some object next to some other object, then put some object next to some other object": True
"put some object next to some other object, then go to some object, then put some object next to some other object, then open some door, then open some door": True

Tasks the agent currently do well: "go to some object", "put some object next to some other object", "pick up some object"
Predict which of these tasks are interesting: "pick up some object, then go to some object", "go to some object, then open some door, then open some door", "pick up some object, then put some object next to some other object, then put some object next to some other object", "open some door, then put some object next to some other object, then go to some object, then put some object next to some other object, then open some door", "go to some object, then pick up some object, then pick up some object, then put some object next to some other object, then go to some object"
Reasoning: Tasks that are recombinations of "go to some object", "put some object next to some other object", or "pick up some object" are not interesting. The only tasks that introduce something different from the tasks done well are "go to some object, then open some door, then open some door" and "open some door, then put some object next to some other object, then go to some object, then put some object next to some other object, then open some door", having a new action of opening a door.
Predictions:
"pick up some object, then go to some object": False
"go to some object, then open some door, then open some door": True
"pick up some object, then put some object next to some other object, then put some object next to some other object": False
"open some door, then put some object next to some other object, then go to some object, then put some object next to some other object, then open some door": True
"go to some object, then pick up some object, then pick up some object, then put some object next to some other object, then go to some object": False
%% user
Tasks the agent currently do well: {done_well_quoted}
Predict which of these tasks are interesting: {candidates_quoted}
)omni";

inline constexpr const char* kitchen_propose = R"omni(%% system
You are a helpful assistant that tells an AI agent the next tasks to do in an embodied kitchen environment. The ultimate goal that it would like your help with is to learn as many interestingly different tasks as possible.

The agent has 13 discrete actions: move ahead, rotate right, rotate left, look up, look down, pick up object, put object, open object, close object, toggle object on, toggle object off, slice object, and fill object with liquid. The agent is in a kitchen with fixed object placements and configuration. The only objects in the kitchen are: "Apple", "Bowl", "Bread", "ButterKnife", "Cabinet", "CoffeeMachine", "CounterTop", "Cup", "DishSponge", "Drawer", "Egg", "Faucet", "Floor", "Fork", "Fridge", "GarbageCan", "HousePlant", "Kettle", "Knife", "Lettuce", "LightSwitch", "Microwave", "Mug", "Pan", "PaperTowelRoll", "PepperShaker", "Plate", "Pot", "Potato", "SaltShaker", "SideTable", "Sink", "SinkBasin", "SoapBottle", "Spatula", "Spoon", "Stool", "StoveBurner", "StoveKnob", "Toaster", "Tomato", "Window", "WineBottle". Objects are of varying distance to the agent’s starting position.

A task is described as a sequence of environment states that need to be achieved:
[env_state1, env_state2, ...]
Each environment state is described by the object states in the room:
[obj_attributes(object_name1, requirement_dict1), obj_attributes(object_name2, requirement_dict2), ...]
Objects not explicitly specified in the environment state do not affect whether the task has been deemed completed or not. Each object has these attributes: "visible", "isToggled", "isBroken", "isFilledWithLiquid", "isDirty", "isCooked", "temperature", "isSliced", "isOpen", "isPickedUp", "receptacleObjects". All attributes are either True/False, except for "temperature" which is Hot/Cold/RoomTemp, and "receptacleObjects" which is a list of objects that the receptacle contains.

I will give you the following information:
Tasks the agent currently does well: ...
Tasks the agent cannot do yet: ...

You must follow the following criteria:
1. You should act as a mentor and guide the AI agent to the next most learnable and interesting tasks.
2. Learnable tasks are those that are not too difficult or easy for the current agent.
3. Interesting tasks are roughly those that are sufficiently different from the ones that the agent can already do, novel, diverse and at least worth learning.
4. Do not suggest tasks that are already given as tasks that the agent currently does well, or tasks that the agent cannot do yet.

You should only respond in the format as described below:
RESPONSE FORMAT:
Reasoning: Based on the information given, do reasoning about what the next learnable and interesting tasks are.
Next tasks in natural language: Suggest 3 learnable and interesting tasks that the agent should learn next.
Next tasks as sequence of environment states: Translate the suggested natural language tasks into the code format as given above.
%% user
Tasks the agent currently does well:
{done_well_lines}
Tasks the agent cannot do yet:
{cannot_do_lines}
)omni";

inline constexpr const char* kitchen_translate = R"omni(%% system
You are a helpful assistant that relabels the tasks from the given code format to natural language descriptions. The tasks are set in an embodied kitchen environment.

The agent has 13 discrete actions: move ahead, rotate right, rotate left, look up, look down, pick up object, put object, open object, close object, toggle object on, toggle object off, slice object, and fill object with liquid. The agent is in a kitchen with fixed object placements and configuration. The only objects in the kitchen are: "Apple", "Bowl", "Bread", "ButterKnife", "Cabinet", "CoffeeMachine", "CounterTop", "Cup", "DishSponge", "Drawer", "Egg", "Faucet", "Floor", "Fork", "Fridge", "GarbageCan", "HousePlant", "Kettle", "Knife", "Lettuce", "LightSwitch", "Microwave", "Mug", "Pan", "PaperTowelRoll", "PepperShaker", "Plate", "Pot", "Potato", "SaltShaker", "SideTable", "Sink", "SinkBasin", "SoapBottle", "Spatula", "Spoon", "Stool", "StoveBurner", "StoveKnob", "Toaster", "Tomato", "Window", "WineBottle". Objects are of varying distance to the agent’s starting position.

A task is described as a sequence of environment states that need to be achieved:
[env_state1, env_state2, ...]
Each environment state is described by the object states in the room:
[obj_attributes(object_name1, requirement_dict1), obj_attributes(object_name2, requirement_dict2), ...]
Objects not explicitly specified in the environment state do not affect whether the task has been deemed completed or not. Each object has these attributes: "visible", "isToggled", "isBroken", "isFilledWithLiquid", "isDirty", "isCooked", "temperature", "isSliced", "isOpen", "isPickedUp", "receptacleObjects". All attributes are either True/False, except for "temperature" which is Hot/Cold/RoomTemp, and "receptacleObjects" which is a list of objects that the receptacle contains.

I will give you the following information:
Tasks in code format: ...

You should only respond in the format as described below:
RESPONSE FORMAT:
Tasks in natural language: Translate the tasks from the given code format to natural language descriptions.
%% user
Tasks in code format:
{tasks_numbered}
)omni";

}  // namespace omni::prompt_data
