#pragma once

// Ten sample queries covering every construct family.
inline constexpr const char* kSampleQueries[] = {
    R"(SELECT "Author" FROM "/Ten-Models-BPMN" WHERE CanOccur("D") AND Conflict("D","E");)",
    R"(SELECT "Version" FROM "/Ten-Models-BPMN" WHERE AlwaysOccurs("C") OR Cooccur("B","C");)",
    R"(SELECT "Date" FROM "/Ten-Models-BPMN" WHERE (CanOccur("G") AND (NOT Conflict("E","G"))) OR
       (TotalConcurrent("C","D") AND AlwaysOccurs("D"));)",
    R"(SELECT "Author","Version" FROM "/Ten-Models-BPMN" WHERE CanOccur({"F","G"},ALL) AND AlwaysOccurs({"F","G"},ANY);)",
    R"(SELECT "Version","Date" FROM "/Ten-Models-BPMN" WHERE Cooccur("B",{"C","D"},ALL) AND TotalConcurrent("B",{"C","D"},ANY);)",
    R"(SELECT "Version","Author" FROM "/Ten-Models-BPMN" WHERE Conflict({"A","B"},{"E","F"},ANY) OR
       (Cooccur({"A","B"},{"E","F"},EACH) AND TotalCausal({"A","B"},{"E","F"},ALL));)",
    R"(SELECT "Date","Author" FROM "/Ten-Models-BPMN" WHERE "C" IN (GetTasksAlwaysOccurs({"C"}) UNION
       GetTasksTotalCausal({"C"},{"B","D"},ALL));)",
    R"(SELECT "Date","Version" FROM "/Ten-Models-BPMN" WHERE "G" IN (GetTasksCanOccur({"G"}) INTERSECT
       GetTasksConflict({"G"},{"D","E","F"},ANY));)",
    R"(SELECT "Version","Date","Author" FROM "/Ten-Models-BPMN" WHERE GetTasksCooccur({"A","B","C"},{"D","E"},ANY) NOT EQUALS
       GetTasksTotalConcurrent({"A","B","C"},{"D","E"},ANY);)",
    R"(SELECT * FROM "/Ten-Models-BPMN" WHERE ({"A","B","E","F"} EXCEPT
       GetTasksCooccur({"A","B","E","F"},{"C","D"},ALL)) OVERLAPS WITH GetTasksConflict({"A","B","E","F"},{"C","D"},ANY);)",
};

